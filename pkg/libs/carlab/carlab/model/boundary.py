from enum import Enum

from pydantic import BaseModel, ConfigDict

from carlab.errors import BoundaryConditionError
from carlab.model.coefficients import CoefficientSet


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"
    ROBIN = "robin"


class BoundaryCondition(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: BoundaryKind = BoundaryKind.DIRICHLET

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls(kind=BoundaryKind.DIRICHLET)

    @classmethod
    def robin(cls) -> "BoundaryCondition":
        return cls(kind=BoundaryKind.ROBIN)

    @property
    def is_dirichlet(self) -> bool:
        return self.kind == BoundaryKind.DIRICHLET

    def check_compatible(self, coeffs: CoefficientSet):
        if self.kind == BoundaryKind.ROBIN and coeffs.p is None:
            raise BoundaryConditionError(
                f"Robin boundary requires p, coefficient set '{coeffs.name}' has none"
            )
