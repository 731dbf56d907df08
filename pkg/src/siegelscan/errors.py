"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class CapacityError(RuntimeError):
    """A request exceeds a memory or format budget."""


class CacheFormatError(RuntimeError):
    """A sieve cache file is corrupt or not in the expected format."""


class ContractError(ValueError):
    """A user-supplied function descriptor violates its declared contract."""
