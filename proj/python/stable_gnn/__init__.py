# Copyright 2026 The StableGNN Authors.
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


"""Robust node classification with contrastive graph structure refinement."""

from ._stable import (
    GraphBundle,
    InputError,
    NumericError,
    default_config,
    dice_attack,
    feature_similarity,
    generate_sbm,
    random_attack,
    renormalized_adjacency,
    rough_preprocess,
    run_experiment,
    run_pipeline,
    variants,
)

__all__ = [
    "GraphBundle",
    "InputError",
    "NumericError",
    "default_config",
    "dice_attack",
    "feature_similarity",
    "generate_sbm",
    "random_attack",
    "renormalized_adjacency",
    "rough_preprocess",
    "run_experiment",
    "run_pipeline",
    "variants",
]
