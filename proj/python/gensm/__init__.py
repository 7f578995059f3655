# SPDX-License-Identifier: Apache-2.0
#
# gensm: spectral-efficiency simulation and hybrid precoder optimization
# for generalized-spatial-modulation mmWave MIMO
# Copyright (C) 2026 The gensm authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Spectral-efficiency simulation and hybrid precoder optimization for
generalized-spatial-modulation mmWave MIMO.

Thin re-export of the compiled extension. Matrices cross the boundary as
numpy arrays; returned arrays are copies, so write state back through the
exposed properties.
"""

from ._gensm import (  # noqa: F401
    AgcTable,
    ChannelParams,
    ExperimentConfig,
    ExperimentMode,
    GradCheckResult,
    HybridPrecoder,
    InnerResult,
    IoError,
    McEstimate,
    OptimizationTrace,
    OptimizerSettings,
    OuterRecord,
    PartitionReport,
    PartitionSelection,
    Rng,
    SeReport,
    SystemConfig,
    __version__,
    agc_response,
    array_response,
    check_gradients,
    covariance,
    derive_seed,
    effective_gain,
    enumerate_agcs,
    grad_a,
    grad_lambda,
    grad_lambda_full,
    load_channel,
    mode_from_name,
    mode_name,
    optimize_analog,
    optimize_digital,
    parse_config_file,
    project_to_feasible,
    random_interior_precoder,
    run_experiment,
    sample_channel,
    sample_channel_with,
    save_channel,
    se_bound_shift,
    se_lower_bound,
    se_monte_carlo,
    se_report,
    select_partition,
    selection_matrix,
    two_step,
    waterfilling_capacity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
