"""Exception hierarchy shared by every pipeline stage."""


class NedError(Exception):
    """Base class for recoverable input errors (CLI exit code 1)."""


class InvariantViolation(NedError):
    """An internal consistency check failed (CLI exit code 2)."""


# ingest
class FileUnreadable(NedError):
    pass


class NoValidRecords(NedError):
    pass


class DuplicateId(NedError):
    pass


class UnsortedInput(NedError):
    pass


class NonPositiveDuration(NedError):
    pass


class OriginAfterData(NedError):
    pass


# entities
class MissingAnnotations(NedError):
    pass


class AnnotationSpanInvalid(NedError):
    pass


# graph / peaks / keygraph
class NoEntities(NedError):
    pass


class EmptySequence(NedError):
    pass


class SeriesTooShort(NedError):
    pass


class EmptyInput(NedError):
    pass


class EmptyGraph(NedError):
    pass


# evaluate
class NoGroundTruth(NedError):
    pass


class ZeroDetections(NedError):
    pass


class SchemaMismatch(NedError):
    pass
