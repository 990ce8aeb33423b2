# Copyright 2026 The aaekit authors
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

"""ASR adversarial-noise toolkit: features, FGSM attack, codec defense, metrics."""

from aaekit._core import (
    Model,
    ToolkitError,
    cer,
    codec_roundtrip,
    extract_logmel,
    gen_noise,
    invert_logmel,
    ks_two_sample,
    levenshtein,
    mix_at_snr,
    snr_adv,
    synth_utterance,
)

__version__ = "0.1.0"

__all__ = [
    "Model",
    "ToolkitError",
    "cer",
    "codec_roundtrip",
    "extract_logmel",
    "gen_noise",
    "invert_logmel",
    "ks_two_sample",
    "levenshtein",
    "mix_at_snr",
    "snr_adv",
    "synth_utterance",
    "__version__",
]
