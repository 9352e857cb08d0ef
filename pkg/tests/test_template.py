"""Template building (medoid, thresholds), serialization, classification."""

import numpy as np
import pytest

from cogbio.biometric.dtw import dtw_distance
from cogbio.biometric.features import FeatureSet, extract_features
from cogbio.biometric.symbols import default_symbols
from cogbio.biometric.synth import render_trace, sample_user_style
from cogbio.biometric.template import (PURPOSE_SYM, PURPOSE_USER, Template,
                                       TemplateBank, build_template, classify,
                                       feature_medoid, multi_dtw)
from cogbio.errors import DataError, ParamError


def fs(symbol=None, user=None, **series):
    return FeatureSet(series={k: np.asarray(v, dtype=float)
                              for k, v in series.items()},
                      symbol_label=symbol, user_label=user)


@pytest.fixture(scope="module")
def corpus():
    """Synthetic renderings: 6 samples per symbol for one user, 4 for another."""
    symbols = default_symbols(3)
    rng = np.random.default_rng(12)
    alice = sample_user_style(symbols.names, rng)
    eve = sample_user_style(symbols.names, rng)
    make = lambda style, sym, k: [
        extract_features(render_trace(sym, style, rng, noise=0.6,
                                      n_points=40, user_label="u"))
        for _ in range(k)]
    return {
        "symbols": symbols,
        "alice": {sym: make(alice, sym, 6) for sym in symbols.names},
        "eve": {sym: make(eve, sym, 4) for sym in symbols.names},
    }


class TestMedoid:
    @pytest.mark.parametrize("seed,t", [(0, 3), (1, 5), (2, 8), (3, 10)])
    def test_matches_exhaustive_argmin(self, seed, t):
        rng = np.random.default_rng(seed)
        samples = [fs(x=np.cumsum(rng.normal(size=rng.integers(10, 20))))
                   for _ in range(t)]
        got = feature_medoid(samples, "x", band_radius=50)
        sums = [sum(dtw_distance(a.series["x"], b.series["x"], band_radius=50)
                    for b in samples)
                for a in samples]
        assert got == int(np.argmin(sums))

    def test_tie_takes_first(self):
        samples = [fs(x=[0.0, 1.0, 2.0])] * 4
        assert feature_medoid(samples, "x", band_radius=20) == 0


class TestBuildTemplate:
    def test_identical_samples_zero_spread(self):
        samples = [fs(x=[0.0, 1.0], y=[1.0, 0.0])] * 5
        tpl = build_template(samples, ("x", "y"))
        assert tpl.mu == 0.0
        assert tpl.sigma == 0.0
        assert tpl.threshold == 0.0

    def test_mu_sigma_match_direct_computation(self, corpus):
        samples = corpus["alice"]["glyph0"]
        tpl = build_template(samples, ("x", "y"))
        dists = np.array([multi_dtw(tpl, s) for s in samples])
        assert tpl.mu == pytest.approx(dists.mean())
        assert tpl.sigma == pytest.approx(dists.std())

    def test_sym_purpose_forces_coordinates(self, corpus):
        tpl = build_template(corpus["alice"]["glyph1"], ("x", "y", "vx"),
                             purpose=PURPOSE_SYM)
        assert tpl.feature_subset == ("x", "y")
        assert tpl.purpose == PURPOSE_SYM

    def test_default_subset_is_available_intersection(self):
        a = fs(x=[0.0, 1.0], y=[0.0, 1.0], vx=[1.0, 1.0])
        b = fs(x=[0.0, 1.0], y=[1.0, 0.0])
        tpl = build_template([a, b])
        assert tpl.feature_subset == ("x", "y")

    def test_needs_two_samples(self):
        with pytest.raises(ParamError, match=">= 2"):
            build_template([fs(x=[0.0, 1.0])], ("x",))

    def test_unknown_feature_rejected(self):
        samples = [fs(x=[0.0, 1.0])] * 3
        with pytest.raises(ParamError, match="unknown"):
            build_template(samples, ("x", "wobble"))

    def test_missing_feature_in_sample(self):
        samples = [fs(x=[0.0, 1.0]), fs(y=[0.0, 1.0])]
        with pytest.raises(DataError):
            build_template(samples, ("x",))

    def test_multi_dtw_sums_over_features(self):
        a = fs(x=[0.0, 1.0, 2.0], y=[2.0, 1.0, 0.0])
        b = fs(x=[0.0, 1.0, 1.0], y=[2.0, 2.0, 0.0])
        tpl = build_template([a, a], ("x", "y"))
        expect = (dtw_distance(a.series["x"], b.series["x"])
                  + dtw_distance(a.series["y"], b.series["y"]))
        assert multi_dtw(tpl, b) == pytest.approx(expect)

    def test_with_z_changes_threshold_only(self, corpus):
        tpl = build_template(corpus["alice"]["glyph2"], ("x", "y"), z=2.0)
        wider = tpl.with_z(5.0)
        assert wider.mu == tpl.mu
        assert wider.sigma == tpl.sigma
        assert wider.threshold > tpl.threshold


class TestSerialization:
    def test_template_round_trip(self, corpus):
        tpl = build_template(corpus["alice"]["glyph0"], ("x", "vy"), z=3.5)
        back = Template.from_json(tpl.to_json())
        assert back.mu == tpl.mu
        assert back.sigma == tpl.sigma
        assert back.feature_subset == tpl.feature_subset
        assert back.z == tpl.z
        assert back.purpose == tpl.purpose
        for name in tpl.feature_subset:
            assert np.array_equal(back.series[name], tpl.series[name])

    def test_bank_round_trip_preserves_decisions(self, corpus):
        bank = make_bank(corpus["alice"])
        back = TemplateBank.from_json(bank.to_json())
        assert back.symbols == bank.symbols
        probe = corpus["alice"]["glyph0"][0]
        a, b = classify(probe, bank), classify(probe, back)
        assert (a.accepted, a.symbol, a.sym_distance) == \
            (b.accepted, b.symbol, b.sym_distance)

    def test_bad_payload(self):
        with pytest.raises(DataError):
            Template.from_json("{\"mu\": 1}")

    def test_bank_symbol_sets_must_match(self, corpus):
        bank = make_bank(corpus["alice"])
        with pytest.raises(DataError, match="differ"):
            TemplateBank(sym_templates=bank.sym_templates,
                         user_templates={"glyph0":
                                         bank.user_templates["glyph0"]})


def make_bank(by_symbol, z_sym=40.0, z_user=40.0):
    return TemplateBank(
        sym_templates={sym: build_template(s, purpose=PURPOSE_SYM, z=z_sym)
                       for sym, s in by_symbol.items()},
        user_templates={sym: build_template(s, ("x", "y", "vx", "vy"),
                                            purpose=PURPOSE_USER, z=z_user)
                        for sym, s in by_symbol.items()})


class TestClassify:
    def test_own_sample_accepted(self, corpus):
        bank = make_bank(corpus["alice"])
        for sym, samples in corpus["alice"].items():
            decision = classify(samples[0], bank, expected=sym)
            assert decision.accepted
            assert decision.symbol == sym
            assert decision.stage is None

    def test_nearest_symbol_decode(self, corpus):
        bank = make_bank(corpus["alice"])
        for sym, samples in corpus["alice"].items():
            assert classify(samples[1], bank).symbol == sym

    def test_wrong_symbol_fails_shape_stage(self, corpus):
        bank = make_bank(corpus["alice"])
        decision = classify(corpus["alice"]["glyph1"][0], bank,
                            expected="glyph0")
        assert not decision.accepted
        assert decision.stage == "symbol-check"
        assert decision.user_distance is None

    def test_imposter_fails_dynamics_with_tight_threshold(self, corpus):
        # Shape gate wide open, dynamics gate at the registration spread.
        bank = make_bank(corpus["alice"], z_sym=1e6, z_user=2.0)
        rejected = sum(
            not classify(s, bank, expected=sym).accepted
            for sym, samples in corpus["eve"].items() for s in samples)
        total = sum(len(s) for s in corpus["eve"].values())
        assert rejected >= 0.75 * total

    def test_unknown_expected_symbol(self, corpus):
        bank = make_bank(corpus["alice"])
        with pytest.raises(DataError, match="glyph9"):
            classify(corpus["alice"]["glyph0"][0], bank, expected="glyph9")

    def test_decision_reports_distances(self, corpus):
        bank = make_bank(corpus["alice"])
        d = classify(corpus["alice"]["glyph2"][3], bank, expected="glyph2")
        assert d.sym_distance >= 0.0
        assert d.user_distance is not None and d.user_distance >= 0.0
