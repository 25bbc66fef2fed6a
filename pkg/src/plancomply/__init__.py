"""Plan-compliance analytics for LLM programming-agent trajectories."""

from .classify import (
    ClassificationContext,
    ClassifierConfig,
    PhaseLetter,
    classify_step,
    classify_trajectory,
)
from .compliance import (
    ComplianceScores,
    PlanNotApplicableError,
    compute_pc,
    compute_poc,
    compute_ppc,
    compute_ppf,
    longest_increasing_subsequence,
    score_langutory,
    score_trajectory,
)
from .flow import (
    TERMINAL,
    FlowTable,
    build_flow,
    collapse_runs,
    emit_sankey,
)
from .graphectory import (
    GraphectoryGraph,
    GraphectoryStats,
    build_graphectory,
    graphectory_stats,
)
from .ingest import (
    load_corpus,
    parse_trajectory,
    serialize_trajectory,
)
from .langutory import (
    PLAN_CATALOGUE,
    Langutory,
    PlanSpec,
    build_langutory,
    compress_letters,
    expand_compressed,
    first_occurrences,
)
from .records import (
    ActionKind,
    Corpus,
    Difficulty,
    StepRecord,
    TrajectoryRecord,
)
from .stats import (
    deterministic_subset,
    group_scores,
    intersection_table,
    mann_whitney_u,
    mcnemar,
    pearson_r,
)
from .variants import (
    SETTING_CATALOGUE,
    PlanSetting,
    ReminderSchedule,
    reminder_positions,
    render_prompt,
)

__version__ = "0.1.0"
