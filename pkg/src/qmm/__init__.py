"""Two-dimensional quality models: facts, activities, attributes and impacts."""

from .dsl import Assessment, ModelSyntaxError, parse, parse_assessment, serialize, standard_prelude
from .model import (
    ActivityNode,
    AppliesTo,
    Assessability,
    AttributeDef,
    AttributedElement,
    Direction,
    FactNode,
    GoalDef,
    Impact,
    ModelBuilder,
    ModelStats,
    NodePath,
    QualityModel,
    Tree,
    add_impact,
    locate,
    resolve,
    stats,
)

__version__ = "0.1.0"
