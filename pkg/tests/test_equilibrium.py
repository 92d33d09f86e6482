import itertools
import json
import math

import numpy as np
import pytest

from conftest import HALF_PI, PI
from quantgames import (
    SearchConfig,
    StrategicForm,
    StrategyParams,
    StrategyProfile,
    best_response,
    canonical_game,
    classify_strategic_form,
    is_nash,
    payoffs_numeric,
    preservation_sweep,
    quantized_payoff_elements,
)
from quantgames.closed_form import ne_margin
from quantgames.engine import COOPERATE, DEFECT, QUANTUM
from quantgames.game_model import classical_elements
from quantgames.equilibrium import (
    fmt,
    parse_p_grid,
    sweep_from_csv,
    sweep_to_csv,
    sweep_to_json,
)

QQ = StrategyProfile(QUANTUM, QUANTUM)
FAST = SearchConfig(17, 9, 20, 1e-6)


class TestElements:
    def test_pd_half(self, pd):
        e = quantized_payoff_elements(pd, 0.5, "entangled")
        assert e.values == pytest.approx((2.625, 1.125, 3.625, 1.625), abs=1e-9)

    def test_cg_one(self, cg):
        assert quantized_payoff_elements(cg, 1.0, "entangled").values == pytest.approx((3, 1, 4, 0), abs=1e-9)

    def test_bos_product(self, bos):
        e = quantized_payoff_elements(bos, 1.0, "product")
        assert e.kind == "AlphaBetaSigma"
        assert e.values == pytest.approx((1.5, 1.5, 0), abs=1e-9)

    @pytest.mark.parametrize("basis", ["entangled", "product"])
    def test_pd_zero(self, pd, basis):
        assert quantized_payoff_elements(pd, 0.0, basis).values == pytest.approx((2.25,) * 4, abs=1e-12)

    @pytest.mark.parametrize("name", ["pd", "cg", "bos"])
    def test_entangled_p1_is_classical(self, name):
        g = canonical_game(name)
        assert quantized_payoff_elements(g, 1.0, "entangled").values == pytest.approx(
            classical_elements(g).values, abs=1e-9
        )

    @pytest.mark.parametrize(
        "name, basis, lines",
        [
            ("pd", "entangled", [(0.75, 2.25), (-2.25, 2.25), (2.75, 2.25), (-1.25, 2.25)]),
            ("cg", "entangled", [(1, 2), (-1, 2), (2, 2), (-2, 2)]),
            ("bos", "entangled", [(1.25, 0.75), (0.25, 0.75), (-0.75, 0.75)]),
            ("pd", "product", [(-0.25, 2.25), (0.25, 2.25), (0.25, 2.25), (-0.25, 2.25)]),
            ("cg", "product", [(-0.5, 2), (0.5, 2), (0.5, 2), (-0.5, 2)]),
            ("bos", "product", [(0.75, 0.75), (0.75, 0.75), (-0.75, 0.75)]),
        ],
    )
    def test_affine_fit(self, name, basis, lines):
        g = canonical_game(name)
        zero = quantized_payoff_elements(g, 0.0, basis).values
        one = quantized_payoff_elements(g, 1.0, basis).values
        for z, o, (slope, intercept) in zip(zero, one, lines):
            assert o - z == pytest.approx(slope, abs=1e-9)
            assert z == pytest.approx(intercept, abs=1e-9)
        mid = quantized_payoff_elements(g, 0.37, basis).values
        for m, (slope, intercept) in zip(mid, lines):
            assert m == pytest.approx(slope * 0.37 + intercept, abs=1e-9)

    def test_bad_basis(self, pd):
        with pytest.raises(ValueError):
            quantized_payoff_elements(pd, 0.5, "bell")


def grid_oracle(game, p, delta, opponent, responder, n_theta=129, n_phi=65):
    """Exhaustive scalar grid search, one payoffs_numeric call per point."""
    best = -math.inf
    for t in np.linspace(0, PI, n_theta):
        for f in np.linspace(0, HALF_PI, n_phi):
            own = StrategyParams(t, f)
            pair = (own, opponent) if responder == "A" else (opponent, own)
            v = payoffs_numeric(game, p, delta, *pair)[0 if responder == "A" else 1]
            best = max(best, v)
    return best


class TestBestResponse:
    def test_pd_vs_cooperate(self, pd):
        s, v = best_response(pd, 1.0, HALF_PI, COOPERATE, "A")
        assert v == pytest.approx(5, abs=1e-9)
        assert (s.theta, s.phi) == pytest.approx((PI, 0), abs=1e-9)

    def test_pd_vs_q(self, pd):
        s, v = best_response(pd, 1.0, HALF_PI, QUANTUM, "B")
        assert v == pytest.approx(3, abs=1e-9)
        assert (s.theta, s.phi) == pytest.approx((0, HALF_PI), abs=1e-9)

    def test_p_zero_constant(self, bos):
        s, v = best_response(bos, 0.0, 0.9, StrategyParams(1.0, 0.3), "A", FAST)
        assert v == pytest.approx(0.75, abs=1e-12)
        # flat surface: tie-break picks the first grid point
        assert (s.theta, s.phi) == (0.0, 0.0)

    @pytest.mark.parametrize(
        "name, p, delta, opp, responder",
        [
            ("pd", 0.6, HALF_PI, StrategyParams(1.2, 0.7), "A"),
            ("cg", 0.9, 0.0, StrategyParams(2.0, 1.1), "B"),
            ("bos", 0.4, 0.8, StrategyParams(0.5, 0.2), "A"),
        ],
    )
    def test_against_dense_grid(self, name, p, delta, opp, responder):
        g = canonical_game(name)
        oracle = grid_oracle(g, p, delta, opp, responder, 65, 33)
        _, v = best_response(g, p, delta, opp, responder, FAST)
        # refinement from a coarser grid must reach at least the dense-grid optimum
        assert v >= oracle - 1e-6

    def test_bad_config(self):
        with pytest.raises(ValueError):
            SearchConfig(1, 5)
        with pytest.raises(ValueError):
            SearchConfig(tolerance=0)
        with pytest.raises(ValueError):
            SearchConfig(refine_iterations=-1)

    def test_bad_responder(self, pd):
        with pytest.raises(ValueError):
            best_response(pd, 1.0, HALF_PI, QUANTUM, "C")


class TestNash:
    def test_qq_pd(self, pd):
        verdict, violation = is_nash(pd, 0.5, HALF_PI, QQ)
        assert verdict
        assert violation <= 1e-9

    def test_cc_pd_not_nash(self, pd):
        res = is_nash(pd, 1.0, HALF_PI, StrategyProfile(COOPERATE, COOPERATE))
        assert not res.verdict
        assert res.max_violation == pytest.approx(2, abs=1e-9)
        assert res.deviation_payoff == pytest.approx(5, abs=1e-9)

    @pytest.mark.parametrize("name", ["pd", "cg", "bos"])
    def test_p_zero_everything_is_nash(self, name):
        g = canonical_game(name)
        for s1, s2 in itertools.product([COOPERATE, DEFECT, StrategyParams(1, 1)], repeat=2):
            assert is_nash(g, 0.0, 1.0, StrategyProfile(s1, s2), FAST).verdict

    @pytest.mark.parametrize("name", ["pd", "cg"])
    def test_qq_violation_vs_margin(self, name):
        g = canonical_game(name)
        for p in (0.25, 1.0):
            res = is_nash(g, p, HALF_PI, QQ)
            tt, ff = np.meshgrid(np.linspace(0, PI, 65), np.linspace(0, HALF_PI, 33))
            min_margin = min(ne_margin(name, p, StrategyParams(t, f)) for t, f in zip(tt.ravel(), ff.ravel()))
            assert abs(res.max_violation - (-min_margin)) <= 1e-6


class TestSweep:
    def test_pd_entangled(self, pd):
        grid = [round(0.1 * k, 10) for k in range(1, 11)]
        recs = preservation_sweep(pd, "entangled", grid)
        assert [r.p for r in recs] == grid
        assert all(r.form is StrategicForm.PRISONERS_DILEMMA for r in recs)

    def test_pd_product(self, pd):
        recs = preservation_sweep(pd, "product", [0.1 * k for k in range(1, 11)])
        assert all(r.form is not StrategicForm.PRISONERS_DILEMMA for r in recs)

    @pytest.mark.parametrize("name", ["pd", "cg", "bos"])
    def test_p_zero_degenerate(self, name):
        for basis in ("entangled", "product"):
            (rec,) = preservation_sweep(canonical_game(name), basis, [0.0])
            assert rec.form is StrategicForm.DEGENERATE

    def test_workers_preserve_order(self, cg):
        grid = list(np.linspace(0, 1, 21))
        serial = preservation_sweep(cg, "entangled", grid)
        parallel = preservation_sweep(cg, "entangled", grid, workers=4)
        assert serial == parallel

    def test_csv_roundtrip(self, bos, pd):
        for game in (bos, pd):
            recs = preservation_sweep(game, "entangled", parse_p_grid("0:1:11"))
            text = sweep_to_csv(recs)
            back = sweep_from_csv(text)
            assert [classify_strategic_form(r.elements) for r in back] == [r.form for r in recs]
            assert [r.form for r in back] == [r.form for r in recs]

    def test_csv_header(self, bos, pd):
        assert sweep_to_csv([], "AlphaBetaSigma").strip() == "p,alpha,beta,sigma,form"
        recs = preservation_sweep(pd, "entangled", [1.0])
        assert sweep_to_csv(recs) == "p,R,S,T,U,form\n1,3,0,5,1,PrisonersDilemma\n"

    def test_json(self, bos):
        recs = preservation_sweep(bos, "product", [1.0])
        doc = json.loads(sweep_to_json(recs, bos, "product"))
        assert doc["records"] == [{"p": 1.0, "alpha": 1.5, "beta": 1.5, "sigma": 0.0, "form": "Degenerate"}]


@pytest.mark.parametrize(
    "spec, expected",
    [("0:1:11", [k / 10 for k in range(11)]), ("0:0:1", [0.0]), ("0.25:0.75:3", [0.25, 0.5, 0.75])],
)
def test_parse_p_grid(spec, expected):
    assert parse_p_grid(spec) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("spec", ["0:1", "0:2:3", "a:b:c", "0:1:0", "0:1:1"])
def test_parse_p_grid_rejects(spec):
    with pytest.raises(ValueError):
        parse_p_grid(spec)


def test_fmt():
    assert fmt(2.9999999999999996) == "3"
    assert fmt(-0.0) == "0"
    assert fmt(1e-32) == "0"
    assert fmt(1 / 3) == "0.333333333333"
