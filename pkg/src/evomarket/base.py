"""Minimal estimator base compatible with scikit-learn conventions.

The fitters in :mod:`evomarket.calibration` follow the familiar
``fit`` / ``predict`` / ``get_params`` protocol so they can be cloned,
inspected and composed by scikit-learn tooling, without making that
library a dependency of a numerics package.  Constructor arguments are
hyperparameters; everything learned by ``fit`` lands in attributes with
a trailing underscore.
"""

from __future__ import annotations

import inspect


class BaseModel:
    """Parameter introspection shared by all fitters."""

    @classmethod
    def _param_names(cls):
        signature = inspect.signature(cls.__init__)
        return [
            name
            for name, p in signature.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep: bool = True) -> dict:
        """Return constructor parameters as a dict (scikit-learn protocol)."""
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(
                    f"invalid parameter {key!r} for {type(self).__name__}; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, key, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"
