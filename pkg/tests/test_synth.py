"""Synthetic trace generator: determinism, structure, user separation."""

import numpy as np
import pytest

from cogbio.biometric.symbols import (COMPLEX_WORDS, EASY_WORDS, SymbolSet,
                                      default_symbols)
from cogbio.biometric.synth import (render_trace, sample_user_style,
                                    symbol_control_points)
from cogbio.errors import ParamError


SYMS = ("zero", "one", "two")


def style(seed=0, symbols=SYMS):
    return sample_user_style(symbols, np.random.default_rng(seed))


class TestSymbolSet:
    def test_word_tables(self):
        assert default_symbols(5).names == COMPLEX_WORDS
        assert len(EASY_WORDS) == 5
        assert default_symbols(3).names == ("glyph0", "glyph1", "glyph2")

    def test_response_mapping_round_trips(self):
        symbols = default_symbols(5)
        for r in range(5):
            assert symbols.response_for(symbols.symbol_for(r)) == r

    def test_duplicate_names_rejected(self):
        with pytest.raises(ParamError):
            SymbolSet(names=("a", "a"))


class TestControlPoints:
    def test_deterministic_per_name(self):
        assert np.array_equal(symbol_control_points("two"),
                              symbol_control_points("two"))

    def test_distinct_across_names(self):
        a, b = symbol_control_points("two"), symbol_control_points("three")
        assert not np.allclose(a, b)

    def test_normalized_to_unit_box(self):
        pts = symbol_control_points("quak")
        assert pts.min() >= -1e-9
        assert pts.max() <= 1.0 + 1e-9


class TestRenderTrace:
    def test_fixed_seed_reproduces_exactly(self):
        a = render_trace("one", style(3), np.random.default_rng(5))
        b = render_trace("one", style(3), np.random.default_rng(5))
        assert a == b

    def test_zero_noise_ignores_rng_state(self):
        s = style(1)
        a = render_trace("two", s, np.random.default_rng(10), noise=0.0)
        b = render_trace("two", s, np.random.default_rng(99), noise=0.0)
        assert a == b

    def test_noise_perturbs(self):
        s = style(1)
        a = render_trace("two", s, np.random.default_rng(10), noise=1.0)
        b = render_trace("two", s, np.random.default_rng(99), noise=1.0)
        assert a != b

    def test_trace_is_structurally_valid(self):
        trace = render_trace("zero", style(0), np.random.default_rng(0),
                             n_points=30)
        assert len(trace) == 30
        assert trace.events[0].action == "down"
        assert trace.events[-1].action == "up"
        ts = [e.t for e in trace.events]
        assert all(b > a for a, b in zip(ts, ts[1:]))

    def test_channels_toggle(self):
        s = style(2)
        rng = np.random.default_rng(0)
        full = render_trace("one", s, rng, include_pressure=True,
                            include_motion=True)
        assert full.events[1].p is not None
        assert full.events[1].motion is not None
        bare = render_trace("one", s, rng, include_pressure=False,
                            include_motion=False)
        assert bare.events[1].p is None
        assert bare.events[1].motion is None

    def test_pressure_in_range(self):
        trace = render_trace("one", style(4), np.random.default_rng(1),
                             noise=2.0)
        for e in trace.events:
            assert 0.0 <= e.p <= 1.0
            assert 0.0 <= e.s <= 1.0

    def test_labels_attached(self):
        trace = render_trace("two", style(0), np.random.default_rng(0),
                             user_label="u9", session_label="s3")
        assert trace.symbol_label == "two"
        assert trace.user_label == "u9"
        assert trace.session_label == "s3"

    def test_unknown_symbol_for_style(self):
        with pytest.raises(ParamError):
            render_trace("seven", style(0), np.random.default_rng(0))


class TestUserSeparation:
    def test_styles_differ_geometrically(self):
        a = render_trace("one", style(0), np.random.default_rng(0), noise=0.0)
        b = render_trace("one", style(1), np.random.default_rng(0), noise=0.0)
        xa = np.array([e.x for e in a.events])
        xb = np.array([e.x for e in b.events])
        assert not np.allclose(xa, xb, atol=1.0)

    def test_same_user_renderings_cluster(self):
        # Within-user geometric spread stays well under between-user spread.
        s0, s1 = style(0), style(1)
        rng = np.random.default_rng(7)

        def xy(trace):
            return np.array([(e.x, e.y) for e in trace.events])

        base = xy(render_trace("two", s0, rng, noise=0.5))
        within = xy(render_trace("two", s0, rng, noise=0.5))
        between = xy(render_trace("two", s1, rng, noise=0.5))
        d_within = np.abs(base - within).mean()
        d_between = np.abs(base - between).mean()
        assert d_within < 0.5 * d_between
