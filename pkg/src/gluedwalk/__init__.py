"""Classical and quantum continuous-time walks on graphs and the glued trees."""

__version__ = "0.1.0"

from .graph import (
    GeneratorMatrix,
    GluedTreesLayout,
    Graph,
    GraphFormatError,
    build_glued_trees,
    column_sizes,
    generator_matrix,
    glued_trees_vertex_count,
    parse_graph,
    write_graph,
)
from .spectral import SpectralDecomposition
from .classical import (
    ColumnChain,
    classical_limiting_distribution,
    column_chain,
    embedded_jump_chain_distribution,
    evolve_classical,
    hitting_probability_curve,
    jump_chain_curve,
)
from .quantum import (
    evolve_quantum,
    hamiltonian_from_graph,
    limiting_distribution_spectral,
    time_averaged_distribution_numeric,
)
from .columns import (
    ColumnBasis,
    ReducedHamiltonian,
    column_basis,
    column_profiles,
    equivalence_check,
    leading_edge,
    project_to_columns,
    reduced_hamiltonian,
)
from .line import bessel_j, front_speed_check, infinite_line_amplitude
