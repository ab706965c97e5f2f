#!/usr/bin/env python3
# Copyright 2026 The dielnoise Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Render the CSV tables written by `noise run` as PNG figures.

Usage: plot.py RUN_DIR [RUN_DIR ...]

Each RUN_DIR is an output directory such as noise-output/fiber-pair-distance.
Only matplotlib and pandas are needed; the core library never plots.
"""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def envelope(ax, x, df, column, color):
    near, far = f"{column}_near", f"{column}_far"
    if near in df and far in df:
        ax.fill_between(x, df[near], df[far], color=color, alpha=0.2, lw=0)


def plane_validation(df, ax):
    ax.loglog(df.d_um, df.S_axial, "o", label="FD axial")
    ax.loglog(df.d_um, df.S_radial, "s", label="FD radial")
    ax.loglog(df.d_um, df.S_axial_analytic, "-", label="slab axial")
    ax.loglog(df.d_um, df.S_radial_analytic, "--", label="slab radial")
    ax.set_xlabel("d [um]")
    ax.set_ylabel("S_E [V^2 m^-2 Hz^-1]")


def distance_interpolation(df, ax):
    ax.loglog(df.d_um, df.S_axial, "o", label="axial")
    ax.loglog(df.d_um, df.S_radial, "s", label="radial")
    ax.loglog(df.d_um, df.S_axial_fit, "-", label="axial fit")
    ax.loglog(df.d_um, df.S_radial_fit, "--", label="radial fit")
    ax.set_xlabel("d [um]")
    ax.set_ylabel("S_E [V^2 m^-2 Hz^-1]")


def fiber_distance(df, ax):
    envelope(ax, df.d_um, df, "ndot_projected", "C0")
    ax.semilogy(df.d_um, df.ndot_projected, "o-", label="predicted")
    ax.set_xlabel("d [um]")
    ax.set_ylabel("heating rate [phonons/s]")


def fiber_frequency(df, ax):
    for i, (d, g) in enumerate(df.groupby("d_um")):
        envelope(ax, g.f_z_MHz, g, "ndot_projected", f"C{i}")
        ax.plot(g.f_z_MHz, g.ndot_projected, "-", color=f"C{i}", label=f"d = {d:g} um")
    ax.set_xlabel("f_z [MHz]")
    ax.set_ylabel("heating rate [phonons/s]")


def loss_tangent(df, ax):
    ax.errorbar(df.index, df.beta_dot, yerr=df.sigma, fmt="o", label="data")
    ax.plot(df.index, df.model_literature, "-", label="literature tan delta")
    ax.plot(df.index, df.model_fit, "--", label="fitted tan delta")
    ax.set_xlabel("point")
    ax.set_ylabel("beta-dot [1/s]")


PLOTTERS = {
    "plane_validation.csv": plane_validation,
    "distance_interpolation.csv": distance_interpolation,
    "fiber_pair_distance.csv": fiber_distance,
    "fiber_pair_frequency.csv": fiber_frequency,
    "loss_tangent_points.csv": loss_tangent,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("runs", nargs="+", type=pathlib.Path)
    args = parser.parse_args()
    for run in args.runs:
        for name, plot in PLOTTERS.items():
            path = run / name
            if not path.exists():
                continue
            fig, ax = plt.subplots(figsize=(6, 4))
            plot(pd.read_csv(path), ax)
            ax.legend()
            fig.tight_layout()
            out = path.with_suffix(".png")
            fig.savefig(out, dpi=150)
            plt.close(fig)
            print(out)


if __name__ == "__main__":
    main()
