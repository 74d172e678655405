"""Exception types shared across the workbench.

HTTP services map these to JSON error bodies ``{code, message}`` where
``code`` is the class name, and clients map them back; keep names stable.
"""


class DpmError(Exception):
    """Base class for all workbench errors."""


# -- clinical store -----------------------------------------------------------

class MissingTable(DpmError):
    pass


class SchemaMismatch(DpmError):
    pass


class ReferentialIntegrityViolation(DpmError):
    pass


class UnknownPerson(DpmError):
    pass


class InvalidSpec(DpmError):
    pass


# -- cohort / features --------------------------------------------------------

class UnknownMember(DpmError):
    pass


class EmptyCohort(DpmError):
    pass


class IoFailure(DpmError):
    pass


class DanglingReference(DpmError):
    pass


class HashMismatch(DpmError):
    pass


# -- training -----------------------------------------------------------------

class ShapeMismatch(DpmError):
    pass


class NonFiniteLoss(DpmError):
    pass


class SingleClass(DpmError):
    pass


class NoPositives(DpmError):
    pass


class EmptyInput(DpmError):
    pass


class DegenerateSplit(DpmError):
    pass


# -- registry -----------------------------------------------------------------

class RegistryError(DpmError):
    """Registry-side failure that has no more specific class."""


class UnknownRun(RegistryError):
    pass


class RunNotActive(RegistryError):
    pass


class RunNotFinished(RegistryError):
    pass


class ParamConflict(RegistryError):
    pass


class MetricStepRegression(RegistryError):
    pass


class UnknownArtifact(RegistryError):
    pass


class UnknownModel(RegistryError):
    pass


class UnknownVersion(RegistryError):
    pass


class InvalidStage(RegistryError):
    pass


class ValueTooLarge(RegistryError):
    pass


class RegistryUnavailable(DpmError):
    """The registry endpoint could not be reached."""


# -- builder / deployment -----------------------------------------------------

class MissingArtifact(DpmError):
    pass


class HealthCheckTimeout(DpmError):
    pass


class NoFreePort(DpmError):
    pass


# -- CLI / stack --------------------------------------------------------------

class PortInUse(DpmError):
    pass


class StaleState(DpmError):
    pass


class AlreadyRunning(DpmError):
    pass


class NoDeployment(DpmError):
    pass


#: name -> class, used by HTTP clients to rehydrate server-side errors.
ERROR_CLASSES = {
    cls.__name__: cls
    for cls in [
        MissingTable, SchemaMismatch, ReferentialIntegrityViolation,
        UnknownPerson, InvalidSpec, UnknownMember, EmptyCohort, IoFailure,
        DanglingReference, HashMismatch, ShapeMismatch, NonFiniteLoss,
        SingleClass, NoPositives, EmptyInput, DegenerateSplit, RegistryError,
        UnknownRun, RunNotActive, RunNotFinished, ParamConflict,
        MetricStepRegression, UnknownArtifact, UnknownModel, UnknownVersion,
        InvalidStage, ValueTooLarge, MissingArtifact, HealthCheckTimeout,
        NoFreePort, PortInUse, StaleState, AlreadyRunning, NoDeployment,
    ]
}
