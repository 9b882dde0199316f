#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Generated plotting scripts for run directories.

The script is an artifact for whoever inspects a run later; the laboratory never imports matplotlib.
"""
from typing import Dict, Iterable, List, Tuple

# (csv, x column, y columns, log scale)
PLOTS: Dict[str, List[Tuple[str, str, Tuple[str, ...], bool]]] = {
    "profile.csv": [("profile.csv", "xi", ("n_tilde", "q_tilde", "a"), False)],
    "evolution.csv": [
        ("evolution.csv", "t", ("re_weighted_shifted", "contraction_lhs"), False),
        ("evolution.csv", "t", ("shift_X",), False),
    ],
    "reference.csv": [("reference.csv", "t", ("contraction_lhs",), False)],
    "h1.csv": [("h1.csv", "t", ("h1_perturbation", "dn_l2", "dq_l2"), False)],
    "residual_refinement.csv": [("residual_refinement.csv", "n_points", ("residual",), True)],
    "picard.csv": [("picard.csv", "k", ("diff_n_l2", "diff_q_l2"), True)],
    "lower_bound.csv": [("lower_bound.csv", "t_span", ("deficit",), True)],
    "ks_refinement.csv": [("ks_refinement.csv", "n_points", ("max_residual",), True)],
    "refinement.csv": [
        ("refinement.csv", "n_points", ("stationary_drift", "entropy_residual", "w_residual", "ks_residual"), True)
    ],
}

HEADER = '''#!/usr/bin/env python
"""Plots for run {run_id}. Needs pandas and matplotlib."""
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

HERE = Path(__file__).resolve().parent


def panel(name, x, ys, log):
    frame = pd.read_csv(HERE / name)
    figure, axis = plt.subplots()
    for y in ys:
        axis.plot(frame[x], frame[y], marker=".", label=y)
    if log:
        axis.set_xscale("log")
        axis.set_yscale("log")
    axis.set_xlabel(x)
    axis.legend()
    axis.set_title(name)
    figure.savefig(HERE / (Path(name).stem + "_" + "_".join(ys) + ".png"), dpi=120)
    plt.close(figure)


if __name__ == "__main__":
'''


def plot_script(run_id: str, files: Iterable[str]) -> str:
    """Source of a script drawing one panel per known CSV present in the run directory."""
    calls = []
    for name in sorted(files):
        for csv, x, ys, log in PLOTS.get(name, []):
            calls.append(f"    panel({csv!r}, {x!r}, {list(ys)!r}, {log!r})")
    body = "\n".join(calls) if calls else "    pass"
    return HEADER.format(run_id=run_id) + body + "\n"
