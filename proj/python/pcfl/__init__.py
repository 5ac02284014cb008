"""Causal feature learning toolkit: exact coarsenings, sample-based CFL/PCFL,
and the confounded-joint simulation machinery."""

from ._pcfl import (
    ConfoundedJoint,
    CoarseningResult,
    Cpt,
    CptKind,
    ExpectedUtilityProfile,
    Partition,
    PcflError,
    PipelineResult,
    SampleSet,
    UtilityTable,
    ValueSpace,
    build_fig1_scm,
    causal_coarsening,
    cause_marginal,
    coarsen_cpt,
    effect_coarsening,
    emit_samples_csv,
    eq_constraint_residual,
    expected_utilities,
    fig1_cpt,
    fig1_utility,
    interventional_cpt,
    observational_causal_coarsening,
    observational_cpt,
    observational_effect_coarsening,
    observational_pragmatic_causal_coarsening,
    parse_cpt_csv,
    parse_samples_csv,
    parse_samples_csv_text,
    parse_utility_csv,
    pragmatic_causal_coarsening,
    pragmatic_effect_coarsening,
    pragmatic_pipeline,
    prop2_probe,
    rbf_utility,
    refines,
    run_cfl,
    run_pcfl,
    sample_dataset,
    smoking_cpt,
    smoking_utility,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
