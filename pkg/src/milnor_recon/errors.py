"""Exception hierarchy. The class name doubles as the rejection reason
reported by :func:`milnor_recon.reconstruct.recognize` and the CLI."""


class MilnorReconError(Exception):
    @property
    def reason(self) -> str:
        return type(self).__name__


class NotClosed(MilnorReconError):
    pass


class NotHomogeneous(MilnorReconError):
    pass


class NoUnit(MilnorReconError):
    pass


class NotLocal(MilnorReconError):
    pass


class NotGorenstein(MilnorReconError):
    pass


class NotInSpan(MilnorReconError):
    pass


class NotFinite(MilnorReconError):
    pass


class InvalidTable(MilnorReconError):
    pass


# recognition failures
class BadAmbientDim(MilnorReconError):
    pass


class NuNotDivisible(MilnorReconError):
    pass


class DimensionMismatch(MilnorReconError):
    pass


class KernelDimMismatch(MilnorReconError):
    pass


class NotFiniteAtOrigin(MilnorReconError):
    pass


# form recovery
class NoNondegenerateSolution(MilnorReconError):
    pass


class DegreeTooLow(MilnorReconError):
    pass


class DegenerateCubic(MilnorReconError):
    pass


class HessePencilDegenerate(MilnorReconError):
    pass
