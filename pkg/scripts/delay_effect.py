"""Test-1-only runs at result delays 0-4, plus the test-2-only reference."""

from _common import parse
from sitqr import harness as H


def main():
    cfg, args = parse(__doc__)
    res = H.sweep_delay(cfg, range(5), workers=args.workers)
    ref = res.extra["reference"]
    H.write_summary(args.out / "delay_summary.csv", res.points + [ref])
    for p in res.points:
        print(f"delay {p.settings.delay}: Ip {p.ip[0]:6.1f}  sumDQ {p.dq[0]:7.0f}")
    print(f"rapid only: Ip {ref.ip[0]:6.1f}  sumDQ {ref.dq[0]:7.0f}")
    if args.plots:
        from sitqr import plots
        plots.delay_chart(res, args.out / "delay.svg")


if __name__ == "__main__":
    main()
