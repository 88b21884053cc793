//! Aggregation of experiment results: heatmaps, Wilcoxon similarity, method
//! rankings, seed set overlap, plateau regions and efficiency curves.

mod compare;
mod heatmap;
mod regions;
mod svg;
mod wilcoxon;

pub use compare::{
    fractional_ranks_desc, group_summaries, jaccard, jaccard_similarity_curve, ranking_tensor, similarity_matrix,
    write_group_means, write_jaccard_curve, GroupMean, JaccardPoint, RankingTensor, SimilarityMatrix, TensorCell,
    SIGNIFICANCE,
};
pub use heatmap::{gradient_magnitude, groups, mean_heatmaps, Group, Heatmap};
pub use regions::{
    extract_regions_and_boundary, fit_log_curve, write_curves, BoundaryKind, CurveRow, EfficiencyCurve, RegionClass,
    RegionMap, EFFECTIVE_MIN, GRADIENT_THRESHOLD, INEFFECTIVE_MAX,
};
pub use svg::{emit_heatmap_svg, write_heatmap_svg};
pub use wilcoxon::{average_ranks, normal_approximation_bound, wilcoxon_signed_rank, WilcoxonResult, MIN_SAMPLE};
