from carlab.testing._config import Resolution

__all__ = ["Resolution"]
