"""Scan the infection scale without testing: early doubling time and mean peak."""

import numpy as np

from _common import parse
from sitqr import harness as H
from sitqr.metrics import I, QI, doubling_time

SCALES = (0.015, 0.1, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0)


def main():
    cfg, args = parse(__doc__)
    cfg = cfg.replace(budget={"b": 0.0, "lambda1": 0.0, "lambda1_grid": (0.0,)})
    rows = []
    for beta0 in SCALES:
        c = cfg.replace(epidemic={"beta0": beta0})
        runs = [H.run_once(c, H.replicate_seed(c.master_seed, r)) for r in range(c.replicates)]
        dt = np.median([doubling_time(o.trajectory[:, I] + o.trajectory[:, QI]) for o in runs])
        ip = np.mean([o.i_p for o in runs])
        rows.append((beta0, dt, ip))
        print(f"beta0={beta0:<6g} median doubling {dt:6.2f} d   mean Ip {ip:7.1f}")
    with open(args.out / "calibration.csv", "w") as fh:
        fh.write("beta0,median_doubling_days,mean_Ip\n")
        for r in rows:
            fh.write(",".join(repr(float(v)) for v in r) + "\n")


if __name__ == "__main__":
    main()
