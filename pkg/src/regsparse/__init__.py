"""Sparseness decisions for regular tree languages and omega-languages."""

from .counting import (
    DensityPoint,
    catalan,
    count_accepted_trees,
    count_accepted_words,
    count_avoiding,
    density_profile,
)
from .errors import CapExceeded, FormatError
from .omega import (
    CylinderWitness,
    MarkedDfa,
    MarkovChainView,
    MeasureVerdict,
    OmegaRegularLanguage,
    decide_measure,
    loop_automaton,
    markov_view,
    rich_prefix_stream,
    witness_prefix,
)
from .sampling import (
    EstimateReport,
    estimate_marked_recurrence,
    estimate_tree_density,
    sample_bst,
    sample_uniform_tree,
    sample_word,
)
from .tree_automata import (
    DensityVerdict,
    DeterministicTreeAutomaton,
    TreeAutomaton,
    decide_density,
    decide_unranked,
    determinize,
    find_sinks,
    parse_tree_automaton,
    reachable_witnesses,
    run,
    state_graph,
)
from .trees import (
    Alphabet,
    Node,
    UnrankedNode,
    conc,
    count_occurrences,
    decode_unranked,
    encode_unranked,
    enumerate_trees,
    format_tree,
    is_subtree,
    parse_tree,
    size,
)
from .word_automata import (
    Dfa,
    ReachabilityPartition,
    UniversalPrefix,
    completing_suffix,
    is_infix_complete,
    parse_dfa,
    reachability_partition,
    run_dfa,
    star_dfa,
    trapping_word,
    universal_prefix,
)

__version__ = "0.1.0"
