"""
Keyed catalogues for inference rules, cited results and CLI operations.
"""
from typing import Any, Callable, Dict, Hashable, List


class AlreadyRegistered(Exception):
    pass


class NotRegistered(Exception):
    pass


class Registry:
    """
    Entries in registration order. ``kind`` names the entries in error messages.
    """

    def __init__(self, kind: str = "entry"):
        self.kind = kind
        self._registry: Dict[Hashable, Any] = {}

    def register(self, key: Hashable, entry: Any = None):
        """
        Register ``entry`` under ``key``. Without an entry, returns a decorator
        registering the decorated callable.
        """
        if entry is None:

            def decorator(func: Callable) -> Callable:
                self.register(key, func)
                return func

            return decorator

        if key in self._registry:
            raise AlreadyRegistered('The %s "%s" is already registered' % (self.kind, key))
        self._registry[key] = entry
        return entry

    def unregister(self, key: Hashable):
        self.get(key)
        del self._registry[key]

    def get(self, key: Hashable) -> Any:
        if key not in self._registry:
            raise NotRegistered('The %s "%s" is not registered' % (self.kind, key))
        return self._registry[key]

    def lookup(self, key: Hashable, default=None) -> Any:
        return self._registry.get(key, default)

    def filter(self, predicate: Callable[[Any], bool]) -> List[Any]:
        return [entry for entry in self._registry.values() if predicate(entry)]

    def keys(self) -> List[Hashable]:
        return list(self._registry)

    def all(self) -> Dict[Hashable, Any]:
        return dict(self._registry)

    def clear(self):
        self._registry = {}

    def __contains__(self, key: Hashable) -> bool:
        return key in self._registry

    def __len__(self) -> int:
        return len(self._registry)
