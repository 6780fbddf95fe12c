from .frames import FrameGraphModel, FrameModel
from .general import HealthResponse
from .response_models import InvariantResultModel, ScenarioRunResponse, TransformTableResponse, VerifyResponse
from .scenario import PARAMS_MODELS, Scenario, TransformTableParams

__all__ = [
    "FrameGraphModel",
    "FrameModel",
    "HealthResponse",
    "InvariantResultModel",
    "ScenarioRunResponse",
    "TransformTableResponse",
    "VerifyResponse",
    "PARAMS_MODELS",
    "Scenario",
    "TransformTableParams",
]
