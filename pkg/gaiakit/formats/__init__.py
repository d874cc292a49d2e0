from gaiakit.formats.codec import detect_kind, dumps, jsonable, load_dataset, load_json, load_model
from gaiakit.formats.models import (
    CategoryModel,
    CoalgebraModel,
    ContractionModel,
    FunctorModel,
    InstanceModel,
    PatternModel,
    PipelineModel,
    SetMapModel,
    SimplicialModel,
    SpaceModel,
    TransformerModel,
)

__all__ = [
    "detect_kind",
    "dumps",
    "jsonable",
    "load_dataset",
    "load_json",
    "load_model",
    "CategoryModel",
    "CoalgebraModel",
    "ContractionModel",
    "FunctorModel",
    "InstanceModel",
    "PatternModel",
    "PipelineModel",
    "SetMapModel",
    "SimplicialModel",
    "SpaceModel",
    "TransformerModel",
]
