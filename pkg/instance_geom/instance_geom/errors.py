class GeometryError(ValueError):
    pass


class DegenerateInputError(GeometryError):
    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class InstanceFormatError(GeometryError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line


class RankError(GeometryError):
    pass


class MalformedPartitionError(GeometryError):
    pass


class AdversaryInvariantError(GeometryError):
    pass


class ConfigError(GeometryError):
    pass


class FitError(GeometryError):
    pass
