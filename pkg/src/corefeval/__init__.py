"""Coreference evaluation toolkit for CoNLL-U corpora with entity
annotation, empty nodes and zero mentions."""

__version__ = "0.1.0"

from .align import (
    Alignment,
    MatchStrategy,
    ZeroMatching,
    align_mentions,
    align_zeros,
    align_zeros_dependency,
    align_zeros_linear,
    match_exact,
    match_head,
    match_partial,
    zero_pair_weight,
)
from .analysis import (
    DatasetStats,
    ErrorProfile,
    LeaderboardRow,
    dataset_stats,
    error_decomposition,
    filter_entities_by_upos,
    filter_mentions_by_upos,
    macro_average,
)
from .conllu import (
    ParseError,
    Violation,
    ViolationCode,
    autofix,
    load_corpus,
    parse_corpus,
    serialize_corpus,
    strip_for_input,
    validate,
)
from .metrics import (
    DataMismatchError,
    PRIMARY_CONFIG,
    ScoreConfig,
    ScoreReport,
    b_cubed,
    blanc,
    ceaf_e,
    conll_f1,
    empty_node_prf,
    lea,
    mor,
    muc,
    score_dataset,
    zero_anaphor_score,
)
from .model import (
    Corpus,
    DepEdge,
    Document,
    Entity,
    Mention,
    MentionShape,
    MultiwordToken,
    Node,
    NodeId,
    NodeRef,
    ScoreTriple,
    Sentence,
    derive_head,
    drop_singletons,
    mention_shape,
)
from .perturb import PerturbRates, perturb_corpus
