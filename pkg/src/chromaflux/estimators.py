"""scikit-learn style front ends for the solvers.

``X`` is one problem instance (see :func:`check_instance` for accepted
forms) and the predicted labels are one value per edge, in file order:
the channel of each link, or the 1-based round of each transfer.
``score`` is the negated objective, so higher is better.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_is_fitted

from . import balanced, clustered, greedy, migration_even, migration_general
from .bounds import conflict_lower_bound, migration_lower_bounds
from .instance import CHANNEL, MIGRATION, colors_to_assignment
from .metrics import conflict_report, require_valid, validate_colors, validate_schedule
from .validation import check_instance, check_k


class _Solver(BaseEstimator):
    kind = ""

    def _solve(self, inst):
        raise NotImplementedError

    def fit(self, X, y=None):
        inst = check_instance(X, self.kind)
        self.instance_ = inst
        self.events_ = {}
        self._solve(inst)
        self.gap_ = self.objective_ - self.lower_bound_
        return self

    def predict(self, X):
        check_is_fitted(self, "labels_")
        inst = check_instance(X, self.kind)
        if inst == self.instance_:
            return self.labels_
        return clone(self).fit(inst).labels_

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def score(self, X, y=None) -> float:
        inst = check_instance(X, self.kind)
        est = self if getattr(self, "instance_", None) == inst else clone(self).fit(inst)
        return -float(est.objective_)


class _ChannelAssigner(_Solver):
    kind = CHANNEL

    def _finish(self, inst, colors):
        require_valid(validate_colors(inst, colors), "assignment")
        self.labels_ = np.asarray(colors, dtype=int)
        self.assignment_ = colors_to_assignment(inst, colors)
        self.report_ = conflict_report(inst, self.assignment_)
        self.objective_ = self.report_.total
        self.lower_bound_ = conflict_lower_bound(inst)


class GreedyChannelAssigner(_ChannelAssigner):
    """Each link takes the channel least used at its two ends."""

    def __init__(self, k=None, variant="deterministic", edge_order="input", seed=None):
        self.k = k
        self.variant = variant
        self.edge_order = edge_order
        self.seed = seed

    def _solve(self, inst):
        k = check_k(inst, self.k)
        seed = self.seed
        if seed is None and (self.edge_order == "random" or self.variant == "randomized"):
            seed = 0
        cfg = greedy.GreedyConfig(self.edge_order, self.variant, seed)
        out = greedy.greedy_assign(inst, k, cfg)
        self._finish(inst, [out[e] for e in inst.edge_ids])


class BalancedChannelAssigner(_ChannelAssigner):
    """Keeps every node's channel classes balanced; within 2|V| of optimal."""

    def __init__(self, k=None):
        self.k = k

    def _solve(self, inst):
        k = check_k(inst, self.k)
        state = balanced.balanced_state(inst, k)
        self.state_ = state
        self.audit_ = balanced.balance_audit(state)
        self.events_ = {"flips": state.flips, "rounds": state.rounds, "retries": state.retries}
        self._finish(inst, state.colors)


class ClusteredChannelAssigner(_ChannelAssigner):
    """Extended greedy for nodes with either one card or k cards."""

    def __init__(self, k=None):
        self.k = k

    def _solve(self, inst):
        self.clusters_ = clustered.find_clusters(inst)
        self._finish(inst, clustered.extended_greedy_colors(inst, self.k))


class _MigrationScheduler(_Solver):
    kind = MIGRATION

    def _finish(self, inst, rounds):
        require_valid(validate_schedule(inst, rounds), "schedule")
        self.rounds_ = rounds
        at = {eid: r for r, edges in enumerate(rounds, start=1) for eid in edges}
        self.labels_ = np.asarray([at[e] for e in inst.edge_ids], dtype=int)
        self.bounds_ = migration_lower_bounds(inst)
        self.objective_ = len(rounds)
        self.lower_bound_ = max(self.bounds_.lb1, self.bounds_.lb2)


class EvenMigrationScheduler(_MigrationScheduler):
    """Optimal schedule when every node's transfer capacity is even."""

    def _solve(self, inst):
        self.plan_ = migration_even.plan_even(inst)
        self.events_ = {"dummies": len(self.plan_.padded.dummies)}
        self._finish(inst, self.plan_.rounds)


class GeneralMigrationScheduler(_MigrationScheduler):
    """Schedule within about twice the square root of optimal extra rounds."""

    def __init__(self, strict=False, palette=None):
        self.strict = strict
        self.palette = palette

    def _solve(self, inst):
        res = migration_general.schedule_general(inst, strict=self.strict, palette=self.palette)
        self.trace_ = res.trace
        self.events_ = dict(res.trace.events)
        self.events_["witness_violations"] = res.trace.witness_violations
        self.events_["size_violations"] = res.trace.size_violations
        self._finish(inst, res.rounds)
