"""Budget-split sweeps at m = 4 for contact levels mu = 2, 10, 20, 30."""

from _common import parse
from sitqr import harness as H


def main():
    cfg, args = parse(__doc__)
    mus = (2, 10, 20, 30)
    res = H.sweep_mu(cfg.replace(budget={"m": 4.0}), mus, workers=args.workers)
    for mu in mus:
        H.write_aggregate(args.out / f"restriction_mu{mu}.csv", res.by(mu=mu))
        print(f"mu={mu}: slope {res.extra['slopes'][mu]:8.1f} Ip per unit lambda1, "
              f"argmin lambda1 {res.extra['argmin'][mu]:g}")
    if args.plots:
        from sitqr import plots
        plots.sweep_chart({f"mu={mu}": res.by(mu=mu) for mu in mus}, args.out / "restriction.svg")


if __name__ == "__main__":
    main()
