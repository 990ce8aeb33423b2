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

import math

import pytest

import aaekit


def test_cer_and_levenshtein():
    assert aaekit.levenshtein("kitten", "sitting") == 3
    assert aaekit.cer("abc", "abc") == 0.0
    assert aaekit.cer("abc", "abd") == pytest.approx(1.0 / 3.0)
    with pytest.raises(aaekit.ToolkitError):
        aaekit.cer("", "abc")


def test_synth_and_features():
    wav = aaekit.synth_utterance("abcab", seed=7)
    assert len(wav) == 5 * int(0.08 * 16000)
    assert max(abs(s) for s in wav) <= 1.0
    feats = aaekit.extract_logmel(wav, 16000)
    assert feats.shape[1] == 80
    assert feats.shape[0] == 1 + (len(wav) - 400) // 160
    # same transcript, same seed -> identical audio
    assert wav == aaekit.synth_utterance("abcab", seed=7)


def test_invert_roundtrip_shape():
    wav = aaekit.synth_utterance("abcabcab", seed=3)
    feats = aaekit.extract_logmel(wav)
    recon = aaekit.invert_logmel(feats, out_len=len(wav), gl_iters=8)
    assert len(recon) == len(wav)
    assert all(math.isfinite(s) for s in recon[:100])


def test_noise_and_mixing():
    n = aaekit.gen_noise("pink", 16000, seed=11)
    assert len(n) == 16000
    rms = math.sqrt(sum(s * s for s in n) / len(n))
    assert rms == pytest.approx(1.0, abs=1e-6)

    speech = aaekit.synth_utterance("abcde", seed=1)
    noise = aaekit.gen_noise("white", len(speech), seed=2)
    mixed = aaekit.mix_at_snr(speech, noise, 10.0)
    p_s = sum(s * s for s in speech) / len(speech)
    p_d = sum((m - s) ** 2 for m, s in zip(mixed, speech)) / len(speech)
    assert 10.0 * math.log10(p_s / p_d) == pytest.approx(10.0, abs=0.01)


def test_codec_roundtrip_preserves_signal():
    wav = aaekit.synth_utterance("abcdefgh", seed=5)
    out = aaekit.codec_roundtrip(wav, preset="hi")
    assert len(out) == len(wav)
    assert aaekit.snr_adv(wav, out) > 10.0


def test_ks_two_sample():
    a = [float(i) for i in range(50)]
    d, p = aaekit.ks_two_sample(a, a)
    assert d == 0.0
    assert p == pytest.approx(1.0)
    b = [x + 30.0 for x in a]
    d2, p2 = aaekit.ks_two_sample(a, b)
    assert d2 > 0.5
    assert p2 < 0.01


def test_model_train_attack_decode():
    model = aaekit.Model.create(seed=0)
    data = [
        (aaekit.extract_logmel(aaekit.synth_utterance(t, seed=i)), t)
        for i, t in enumerate(["abcab", "bacba", "cabac", "abbac"])
    ]
    losses = model.train(data, epochs=3, seed=0)
    assert len(losses) == 3
    assert all(math.isfinite(x) for x in losses)

    feats = data[0][0]
    text, score = model.decode(feats)
    assert isinstance(text, str) and math.isfinite(score)

    adv, clean_decode = model.attack(feats, epsilon=0.3)
    assert adv.shape == feats.shape
    diff = abs(adv - feats).max()
    assert diff == pytest.approx(0.3, abs=1e-12) or diff == 0.0
