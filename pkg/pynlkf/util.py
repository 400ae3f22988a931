from abc import ABC
from typing import Optional


class Named(ABC):
    __NAME__: Optional[str] = None

    @property
    def name(self) -> str:
        return self.__NAME__

    def __repr__(self):
        return f"{type(self).__name__}({self.__NAME__})"
