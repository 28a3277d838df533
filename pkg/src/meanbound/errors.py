class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""
