#!/usr/bin/env python3
"""Plot a cavdd sweep CSV: cavity V_sym against the free-space references.

usage: plot_sweep.py fig2a.csv [out.png]
"""
import csv
import sys

import matplotlib.pyplot as plt


def load(path):
    with open(path) as f:
        rows = [line for line in f if not line.startswith("#")]
    reader = csv.DictReader(rows)
    x_name = reader.fieldnames[0]
    data = {}
    for row in reader:
        if row["status"] != "ok" or float(row["omega_21"]) < 0:
            continue
        x = float(row[x_name])
        data[x] = (float(row["v_sym"]), float(row["v0_free"]), float(row["vomega_free"]))
    xs = sorted(data)
    return x_name, xs, [data[x] for x in xs]


def main():
    x_name, xs, values = load(sys.argv[1])
    fig, ax = plt.subplots()
    ax.plot(xs, [v[0] for v in values], label="cavity V_sym")
    ax.plot(xs, [v[1] for v in values], "--", label="free V0")
    ax.plot(xs, [v[2] for v in values], ":", label="free V(omega)")
    ax.set_xlabel(x_name)
    ax.set_yscale("symlog", linthresh=1.0)
    ax.legend()
    if len(sys.argv) > 2:
        fig.savefig(sys.argv[2], dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
