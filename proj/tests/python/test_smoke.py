"""Smoke tests for the python bindings."""

import math

import pytest

import detlim


def test_version():
    assert detlim.__version__ == "0.1.0"


def test_graph_builders_and_validation():
    g = detlim.build_complete_graph_ust(4)
    assert (g.num_v, g.num_u, g.d, g.k) == (4, 6, 3, 1)
    report = detlim.validate(g)
    assert report["ok"]
    assert report["left_degree"] == 3

    kal = detlim.build_kalai_complex(5, 2)
    assert kal.num_v == kal.num_u == 10
    assert detlim.validate(kal)["ok"]

    gr = detlim.build_grassmannian(2, 4, 1)
    assert (gr.num_v, gr.num_u, gr.d, gr.k) == (15, 35, 7, 2)
    assert gr.warning  # rank caveat at n=4

    with pytest.raises(detlim.DetlimError):
        detlim.build_complete_graph_ust(2)


def test_signed_matrix_shape():
    g = detlim.build_kalai_complex(5, 2)
    b = detlim.signed_matrix(g)
    assert b.shape == (10, 10)
    assert abs(b).sum(axis=0).tolist() == [3.0] * 10


def test_spectral_and_sampling():
    g = detlim.build_complete_graph_ust(4)
    s = detlim.decompose(g)
    assert s.rank == 3
    assert detlim.trace_identity_gap(g) < 1e-9

    h = detlim.projection_subspace(s)
    assert h.dim == 3

    rng = detlim.RandomStream(7)
    draw = detlim.sample(h, rng)
    assert len(draw) == 3
    # determinism
    assert detlim.sample(detlim.projection_subspace(s), detlim.RandomStream(3)) == \
        detlim.sample(detlim.projection_subspace(s), detlim.RandomStream(3))

    entries = detlim.enumerate_all(h)
    assert len(entries) == 16
    assert abs(sum(p for _, p in entries) - 1.0) < 1e-9
    assert all(abs(p - 1 / 16) < 1e-9 for _, p in entries)

    assert detlim.marginal(h, [0]) == pytest.approx(0.5, abs=1e-9)
    cond = detlim.condition(h, [0], [])
    assert detlim.marginal(cond, [0]) == pytest.approx(1.0, abs=1e-9)


def test_factor_sampler():
    g = detlim.build_kalai_complex(5, 2)
    fs = detlim.FactorSampler(g)
    assert fs.rank == 6
    rng = detlim.RandomStream(1)
    draw = fs.draw(rng)
    assert len(draw) == 6
    h = detlim.projection_subspace(detlim.decompose(g))
    assert fs.marginal(0) == pytest.approx(detlim.marginal(h, [0]), abs=1e-8)


def test_trees_and_limit_law():
    t = detlim.RootedTree.from_parents([-1, 0, 1])
    assert t.code == "((()))"
    assert detlim.is_valid(t, 1)
    assert detlim.matching_count(t, []) == 2
    assert detlim.aut_size(t) == 1
    assert detlim.tk_ball_mass(t, 1) == pytest.approx(math.exp(-1), rel=1e-12)

    dist = detlim.tk_distribution(1, 2, 41)
    assert dist.residual < 1e-6
    assert dist.total() == pytest.approx(1.0, abs=1e-9)

    rng = detlim.RandomStream(5)
    ball = detlim.sample_tk_ball(1, 2, rng)
    assert ball.height == 2
    one_out = detlim.sample_one_out_ball(1, 1000, 2, rng)
    assert one_out.height == 2


def test_experiments():
    g = detlim.build_complete_graph_ust(6)
    rng = detlim.RandomStream(9)
    emp = detlim.empirical_ball_distribution(g, 2, 200, 4, rng)
    assert emp.total() == pytest.approx(1.0, abs=1e-9)

    h = detlim.projection_subspace(detlim.decompose(g))
    exact = detlim.exact_ball_distribution(g, h, 2)
    assert detlim.tv_distance(emp, exact) < 0.2

    ball = detlim.extract_ball(g, [0, 1, 2, 3, 4], 0, 2)
    assert ball is None or ball.height <= 2

    report = detlim.convergence_experiment("ust", "", [8, 12], 1, 2, 100, 4, 3)
    assert [row["size"] for row in report["rows"]] == [8, 12]
