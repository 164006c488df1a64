"""Smoothed bootstrap inference for persistent homology statistics."""

__version__ = "0.1.0"

from .pointcloud import PointCloud, load_csv, save_csv, scale, root_n_factor, distance_matrix
from .complexes import FilteredComplex, build_vr, build_cech, verify_complex_conditions
from .persistence import (
    PersistenceDiagram,
    compute_diagram,
    persistent_betti,
    persistent_betti_direct,
    euler_characteristic,
    truncated_euler,
    geometric_lemma_check,
)
from .bounded import bounded_cycle_space, bounded_boundary_space, bounded_persistent_betti, bounded_geometric_lemma_check
from .statistics import StatisticSpec, StatisticValue, evaluate, knn_total_length, add_one_cost
from .density import KernelDensityEstimate, fit_kde, silverman_bandwidth, adaptive_bandwidth, kde_evaluate, kde_sample, lp_error
from .bootstrap import BootstrapConfig, smoothed_bootstrap, standard_bootstrap, confidence_band, confidence_bands, w2_empirical, unique_fraction
from .simulate import generate, true_mean_estimate, coverage_experiment, reference_spec
