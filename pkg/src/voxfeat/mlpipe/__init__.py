"""Feature-table pipeline: filtering, decomposition, selection, baseline
models, cross-validated scoring, and plot-data exports."""

from .model import (
    LinearModel,
    LogisticModel,
    accuracy_score,
    fit_lasso,
    fit_logistic,
    fit_ols,
    fit_ridge,
    r2_score,
)
from .select import (
    CurvePoint,
    anova_f_select,
    anova_f_values,
    cv_score_curve,
    importance_select,
    mrmr_rank,
    rfe_select,
)
from .table import (
    FeatureTable,
    StandardizeParams,
    apply_standardize,
    fit_standardize,
    impute_and_standardize,
    impute_only,
    is_classification,
    read_table_csv,
    table_to_csv_text,
    write_table_csv,
)
from .transform import (
    FactorResult,
    IcaResult,
    PcaResult,
    SelectionResult,
    correlation_matrix,
    factor_analysis,
    high_correlation_filter,
    ica,
    low_variance_filter,
    pca,
)
from .viz import (
    HeatmapExport,
    ScatterExport,
    ScatterMatrixExport,
    SwarmExport,
    corr_heatmap_export,
    scatter_export,
    scatter_matrix_export,
    swarm_export,
    viz_exports,
)

__all__ = [
    "CurvePoint",
    "FactorResult",
    "FeatureTable",
    "HeatmapExport",
    "IcaResult",
    "LinearModel",
    "LogisticModel",
    "PcaResult",
    "ScatterExport",
    "ScatterMatrixExport",
    "SelectionResult",
    "StandardizeParams",
    "SwarmExport",
    "accuracy_score",
    "anova_f_select",
    "anova_f_values",
    "apply_standardize",
    "corr_heatmap_export",
    "correlation_matrix",
    "cv_score_curve",
    "factor_analysis",
    "fit_lasso",
    "fit_logistic",
    "fit_ols",
    "fit_ridge",
    "fit_standardize",
    "high_correlation_filter",
    "ica",
    "importance_select",
    "impute_and_standardize",
    "impute_only",
    "is_classification",
    "low_variance_filter",
    "mrmr_rank",
    "pca",
    "r2_score",
    "read_table_csv",
    "rfe_select",
    "scatter_export",
    "scatter_matrix_export",
    "swarm_export",
    "table_to_csv_text",
    "viz_exports",
    "write_table_csv",
]
