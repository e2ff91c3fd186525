class OredynError(Exception):
    pass


class ValidationError(OredynError):
    """
    Raised for malformed or mathematically invalid input.
    """

    def __init__(self, message: str, position: int = None):
        self.position = position
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)


class ResourceCapExceeded(OredynError):
    def __init__(self, cap_name: str, requested, limit):
        self.cap_name = cap_name
        self.requested = requested
        self.limit = limit
        super().__init__("Resource cap %s exceeded: requested %s, limit %s" % (cap_name, requested, limit))


class UnsupportedFamily(OredynError):
    pass


class UnsupportedShape(OredynError):
    pass


class InversionUnavailable(OredynError):
    pass


class NotInvariant(OredynError):
    pass
