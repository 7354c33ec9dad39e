from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from carlab.consts import DEFAULT_AMPLITUDE_CAP

# (x: (n, P), t, u: (N, P), gradu: (N, n, P)) -> (N, P)
SemilinearMap = Callable[[np.ndarray, float, np.ndarray, np.ndarray], np.ndarray]


class Semilinearity(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eval: Optional[SemilinearMap] = None
    lipschitz: float = Field(default=0.0, ge=0)
    beta: float = Field(default=0.0, ge=0, le=1)
    # bounded set U of the Lipschitz condition, realized as a sup-norm cap
    amplitude_cap: float = Field(default=DEFAULT_AMPLITUDE_CAP, gt=0)
    name: str = "zero"

    @classmethod
    def zero(cls) -> "Semilinearity":
        return cls()

    @property
    def is_linear(self) -> bool:
        return self.eval is None

    def __call__(
        self, x: np.ndarray, t: float, u: np.ndarray, gradu: np.ndarray
    ) -> np.ndarray:
        if self.eval is None:
            return np.zeros_like(u)
        return np.broadcast_to(self.eval(x, t, u, gradu), u.shape).astype(float)
