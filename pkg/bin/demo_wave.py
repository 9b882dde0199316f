#!/usr/bin/env python

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

# -*- coding: utf-8 -*-
from app.lab.physics.fields import Grid
from app.lab.physics.params import default_theorem_constants, make_end_states, validate_end_states
from app.lab.physics.wave import build_profile, exact_profile, profile_diagnostics

"""
    This is a DEMO for the wave module: the viscous shock between n = 2 and n = 1.95

    The purpose of this demo is to show how the physics modules can be used directly, without a
    configuration file or a run directory.
"""

if __name__ == "__main__":
    end = make_end_states(2.0, 1.95, 0.0)
    print(validate_end_states(end))

    profile = build_profile(end, default_theorem_constants(end), Grid(xi_min=-480.0, xi_max=480.0, n_points=4097))
    diagnostics = profile_diagnostics(profile)
    print(diagnostics)
    print("max deviation from the closed form:", abs(profile.n_tilde - exact_profile(profile.grid.xi, end)).max())
