from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from carlab.errors import BoundaryConditionError, CoefficientEvaluationError

CoefficientField = Callable[[np.ndarray, float], np.ndarray]


def constant_field(value) -> CoefficientField:
    array = np.asarray(value, dtype=float)

    def field(x: np.ndarray, t: float) -> np.ndarray:
        return array[..., None]

    return field


class CoefficientSet(BaseModel):
    """
    Coefficient fields of the operator A(t).

    Every field is a callable ``(x, t) -> array`` where ``x`` has shape ``(n, P)``
    and the result broadcasts to the documented shape with the point axis last:

    - ``a``: ``(N, N, n, n, P)`` indexed ``[k, l, i, j]`` for a_ij^{kl}
    - ``b``: ``(N, N, n, P)`` indexed ``[k, l, i]``
    - ``c``: ``(N, N, P)`` indexed ``[k, l]``
    - ``p``: ``(P,)`` evaluated on boundary points only

    Output component ``l`` of ``A u`` collects ``sum_k a^{kl} ... u_k``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int = Field(ge=1)
    n: int = Field(default=1, ge=1, le=2)
    a: CoefficientField
    b: Optional[CoefficientField] = None
    c: Optional[CoefficientField] = None
    p: Optional[CoefficientField] = None
    sigma: float = Field(gt=0)
    time_independent: bool = True
    name: str = "custom"

    @classmethod
    def from_constants(
        cls,
        a,
        b=None,
        c=None,
        p: float | None = None,
        *,
        sigma: float,
        name: str = "custom",
    ) -> "CoefficientSet":
        a = np.asarray(a, dtype=float)
        return cls(
            N=a.shape[0],
            n=a.shape[2],
            a=constant_field(a),
            b=None if b is None else constant_field(b),
            c=None if c is None else constant_field(c),
            p=None if p is None else constant_field(p),
            sigma=sigma,
            time_independent=True,
            name=name,
        )

    @property
    def has_lower_order(self) -> bool:
        return self.b is not None or self.c is not None

    def diffusion(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._evaluate(self.a, "a", x, t, (self.N, self.N, self.n, self.n))

    def drift(self, x: np.ndarray, t: float) -> np.ndarray:
        shape = (self.N, self.N, self.n)
        if self.b is None:
            return np.zeros(shape + (x.shape[-1],))
        return self._evaluate(self.b, "b", x, t, shape)

    def reaction(self, x: np.ndarray, t: float) -> np.ndarray:
        shape = (self.N, self.N)
        if self.c is None:
            return np.zeros(shape + (x.shape[-1],))
        return self._evaluate(self.c, "c", x, t, shape)

    def robin(self, x: np.ndarray, t: float) -> np.ndarray:
        if self.p is None:
            raise BoundaryConditionError(
                f"Robin boundary requested but coefficient set '{self.name}' has no p"
            )
        return self._evaluate(self.p, "p", x, t, ())

    def _evaluate(
        self, field: CoefficientField, label: str, x: np.ndarray, t: float, shape
    ) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        try:
            values = np.broadcast_to(
                np.asarray(field(x, t), dtype=float), shape + (x.shape[-1],)
            )
        except Exception as e:
            raise CoefficientEvaluationError(
                f"Coefficient '{label}' of '{self.name}' failed at t={t}: {e}", x=x, t=t
            ) from e
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0][-1]
            raise CoefficientEvaluationError(
                f"Coefficient '{label}' of '{self.name}' is not finite at "
                f"x={x[:, bad].tolist()}, t={t}",
                x=x[:, bad],
                t=t,
            )
        return values
