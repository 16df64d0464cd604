# Copyright 2026 The PPTM Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Privacy-preserving traffic monitoring: Python bindings."""

import json

from ._core import (
    CSV_SCHEMA,
    AggregationError,
    CapacityError,
    DecodeError,
    Error,
    InvalidArgumentError,
    Paillier,
    SeqCode,
    SignatureError,
    UnknownPseudonymError,
    expected_counts,
    format_scenario,
    keygen,
    link_attack,
    run_bench_csv,
    run_scenario_json,
)


def run_scenario(text, scheme=None, seed=None):
    """Simulate a scenario file's text and return the result as a dict."""
    return json.loads(run_scenario_json(text, scheme=scheme, seed=seed))


__all__ = [
    "CSV_SCHEMA",
    "AggregationError",
    "CapacityError",
    "DecodeError",
    "Error",
    "InvalidArgumentError",
    "Paillier",
    "SeqCode",
    "SignatureError",
    "UnknownPseudonymError",
    "expected_counts",
    "format_scenario",
    "keygen",
    "link_attack",
    "run_bench_csv",
    "run_scenario",
    "run_scenario_json",
]
