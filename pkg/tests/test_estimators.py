from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from analayout.cost import area_cost
from analayout.estimators import (FLOORPLANNERS, GAFloorplanner, GlobalRouter,
                                  PSOFloorplanner, RLFloorplanner, RLSAFloorplanner,
                                  SAFloorplanner)
from analayout.rl import PPOConfig, train

from conftest import ota5

FAST = {
    "sa": dict(steps=200),
    "ga": dict(population=8, generations=3),
    "pso": dict(population=8, iterations=3),
    "rlsa": dict(rl_steps=16, sa_steps=100, train_episodes=1),
    "rl": dict(steps=32, train_episodes=1, train_steps=32),
}


def test_registry():
    assert FLOORPLANNERS == {"sa": SAFloorplanner, "ga": GAFloorplanner,
                             "pso": PSOFloorplanner, "rlsa": RLSAFloorplanner,
                             "rl": RLFloorplanner}


def test_params_and_clone():
    est = SAFloorplanner(t0=3.0, steps=10, random_state=4)
    assert est.get_params()["t0"] == 3.0
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(steps=20)
    assert est.steps == 20 and twin.steps == 10


@pytest.mark.parametrize("tag", sorted(FAST))
def test_fit_predict_score(tag):
    c = ota5()
    est = FLOORPLANNERS[tag](random_state=0, objective="area", **FAST[tag])
    with pytest.raises(NotFittedError):
        est.predict(c)
    pl = est.fit(c).predict(c)
    assert set(pl.rects) == set(c.ids)
    assert est.score(c) == -est.best_cost_
    assert est.best_cost_ == pytest.approx(area_cost(pl))
    m = est.metrics()
    assert set(m) == {"runtime_s", "empty_space_pct", "hpwl_um", "area_um2", "cost"}
    again = clone(est).fit(c)
    assert again.placement_ == est.placement_


def test_policy_estimator_accepts_trained_model():
    c = ota5()
    model, _ = train("pure", 5, PPOConfig.for_mode("pure", episodes=1, steps_per_episode=16),
                     np.random.default_rng(0), circuits=[c], objective="area")
    est = RLFloorplanner(model=model, steps=20, random_state=1, objective="area").fit(c)
    assert est.model_ is model


def test_router_estimator():
    c = ota5()
    pl = SAFloorplanner(steps=200, random_state=0).fit(c).placement_
    r = GlobalRouter(capacity=100)
    with pytest.raises(NotFittedError):
        r.transform()
    r.fit(pl, c)
    assert r.n_spread_iter_ == 0 and r.placement_ is pl
    assert r.transform() == r.routing_.conduits
    assert set(r.routing_.trees) == {n.name for n in c.nets}
    assert clone(r).get_params() == r.get_params()
