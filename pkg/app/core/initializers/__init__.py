# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0
