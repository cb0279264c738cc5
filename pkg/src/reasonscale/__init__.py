"""Complexity-controlled reasoning benchmarks and scaling metrics.

The toolkit generates question families whose variant index scales the
amount of simulation a solver must do, composes independent questions
into composite ones, samples reasoning models (or a synthetic stand-in
with a known law), evaluates compute/accuracy scaling, and curates
supervision data from composite rollouts.
"""

from .compo import (
    ConnectorTemplate,
    TaggedQuestion,
    Triplet,
    build_triplets,
    check_independence,
    compose,
    max_cross_subject_pairs,
)
from .errors import (
    CapacityError,
    ConfigError,
    FitError,
    IngestError,
    ParameterError,
    ReasonscaleError,
    RemoteBatchError,
    TemplateError,
)
from .families import (
    Family,
    Question,
    ShortcutVerdict,
    check_no_shortcut,
    gen_family,
    group_families,
    read_questions,
    write_questions,
)
from .metrics import (
    CompoReport,
    LawFit,
    MonoReport,
    QuestionEstimate,
    TripletEstimate,
    compo_eval,
    estimate_question,
    fit_laws,
    mono_eval,
    spearman,
    triplet_estimates,
)
from .parsing import (
    canonicalize_answer,
    count_tokens,
    extract_answers,
    find_boxed,
    grade,
    split_reasoning,
)
from .records import (
    SampleRecord,
    SamplingConfig,
    read_records,
    record_from_raw,
    write_records,
)
from .seeds import SeedSpec, StepRule, default_catalog, load_catalog
from .sft import (
    Candidate,
    Selection,
    SupervisionExample,
    TripletSamples,
    emit_dataset,
    select_min_gap,
    select_uniform,
)
from .synthetic import (
    SynthModelSpec,
    SynthQuestion,
    synth_composite_respond,
    synth_families,
    synth_respond,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Candidate",
    "CompoReport",
    "ConfigError",
    "ConnectorTemplate",
    "Family",
    "FitError",
    "IngestError",
    "LawFit",
    "MonoReport",
    "ParameterError",
    "Question",
    "QuestionEstimate",
    "ReasonscaleError",
    "RemoteBatchError",
    "SampleRecord",
    "SamplingConfig",
    "SeedSpec",
    "Selection",
    "ShortcutVerdict",
    "StepRule",
    "SupervisionExample",
    "SynthModelSpec",
    "SynthQuestion",
    "TaggedQuestion",
    "TemplateError",
    "Triplet",
    "TripletEstimate",
    "TripletSamples",
    "build_triplets",
    "canonicalize_answer",
    "check_independence",
    "check_no_shortcut",
    "compo_eval",
    "compose",
    "count_tokens",
    "default_catalog",
    "emit_dataset",
    "estimate_question",
    "extract_answers",
    "find_boxed",
    "fit_laws",
    "gen_family",
    "grade",
    "group_families",
    "load_catalog",
    "max_cross_subject_pairs",
    "mono_eval",
    "read_questions",
    "read_records",
    "record_from_raw",
    "select_min_gap",
    "select_uniform",
    "spearman",
    "split_reasoning",
    "synth_composite_respond",
    "synth_families",
    "synth_respond",
    "triplet_estimates",
    "write_questions",
    "write_records",
]
