"""Exception hierarchy for the solver and its I/O surfaces."""


class VoxelasticError(Exception):
    """Base class for all solver errors."""


class WorldFormatError(VoxelasticError):
    """Malformed world or scenario document (message carries field context)."""


class NoStructureFound(VoxelasticError):
    """No structural block within the scan radius of the seed."""


class EmptyStructure(VoxelasticError):
    """Structure discovery produced zero particles."""


class DanglingLoad(VoxelasticError):
    """A load block touches the structure but has no structural block to rest on."""


class DegenerateOffset(VoxelasticError):
    """Kernel gradient requested at zero separation."""


class SingularCorrection(VoxelasticError):
    """Correction tensor is not invertible (under-supported particle)."""


class InvertedElement(VoxelasticError):
    """det F <= 0 for some particle; the time step is too large or the state degenerate."""


class NonFinite(VoxelasticError):
    """NaN or Inf detected in the particle state."""


class SpecialBlockNotFound(VoxelasticError):
    """The tracked block coordinate is not a particle of the discovered structure."""


class UnknownProperty(VoxelasticError):
    """Property name is not in the registry."""


class OutOfRange(VoxelasticError):
    """Property value is outside its validation range."""
