"""scikit-learn style front end.

``fit`` takes a system (or anything :func:`check_system` accepts) and stores
results in trailing-underscore attributes; ``transform`` maps state vectors
(rows of ``X``) into the transformed coordinates exactly, returning object
arrays of Fractions.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .controllability import DEFAULT_LIMIT, control
from .observability import observe
from .partition import CELLS, partition
from .validation import check_states, check_system, to_object_array


class ObservableNodes(TransformerMixin, BaseEstimator):
    """Unique set of observable nodes and the coordinate map ``z = T x``.

    Parameters
    ----------
    check_oracle : bool
        Cross-check the block reduction against the direct membership test
        and raise :class:`InvariantViolation` on disagreement.
    """

    def __init__(self, check_oracle: bool = True):
        self.check_oracle = check_oracle

    def fit(self, X, y=None):
        sys = check_system(X)
        res = observe(sys, check=self.check_oracle)
        self.system_ = sys
        self.result_ = res
        self.rank_ = res.q
        self.observable_set_ = frozenset(res.observable_set)
        self.observable_labels_ = sys.names(res.observable_set)
        self.trace_ = res.trace
        self.T_ = res.T
        self.n_features_in_ = sys.n
        return self

    def transform(self, X):
        check_is_fitted(self, "result_")
        states = check_states(X, self.n_features_in_)
        return to_object_array((self.T_ @ states.T).T)


class ControllableNodes(TransformerMixin, BaseEstimator):
    """Core controllable set, its completions and perturbed nodes.

    ``transform`` applies ``z = T^-1 x`` for the completion selected by
    ``choice``; a reachable state has zeros in its last ``N - rank`` entries.
    """

    def __init__(self, limit: int | None = DEFAULT_LIMIT, choice: int = 0):
        self.limit = limit
        self.choice = choice

    def fit(self, X, y=None):
        sys = check_system(X)
        res = control(sys, self.limit)
        self.system_ = sys
        self.result_ = res
        self.rank_ = res.q
        self.core_ = res.C1
        self.choices_ = res.choices
        self.controllable_sets_ = [c.C for c in res.choices]
        self.n_features_in_ = sys.n
        return self

    def transform(self, X):
        check_is_fitted(self, "result_")
        T_inv = self.choices_[self.choice].T_inv
        states = check_states(X, self.n_features_in_)
        return to_object_array((T_inv @ states.T).T)


class NetworkDecomposition(BaseEstimator):
    """Six-cell node partition, one per reported completion.

    After ``fit``, ``labels_`` gives the cell name of every node for the
    completion selected by ``choice``, in the manner of clustering estimators.
    """

    def __init__(self, limit: int | None = DEFAULT_LIMIT, choice: int = 0):
        self.limit = limit
        self.choice = choice

    def fit(self, X, y=None):
        sys = check_system(X)
        self.observability_ = observe(sys)
        self.controllability_ = control(sys, self.limit)
        self.partitions_ = [partition(self.observability_, self.controllability_, c)
                            for c in self.controllability_.choices]
        chosen = self.partitions_[self.choice]
        self.cells_ = {name: sys.names(chosen[name]) for name in CELLS}
        self.labels_ = [chosen.cell_of(i) for i in range(sys.n)]
        self.system_ = sys
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
