//! Parameter-space classification of matrix families, grid scans, and the
//! symbolic description of the points that are not Jordan stable.

mod builtin;
mod classify;
mod family;
mod symbolic;

pub use builtin::{builtin, builtin_families, builtin_names};
pub use classify::{
    classify_point, decimal_rational, scan_grid, GridSpec, PointClass, PointKind, ScanOptions, ScanReport,
    ScanSummary, MAX_GRID_POINTS,
};
pub use family::{exact_point, float_point, FamilySpec, MatrixFamily};
pub use symbolic::{
    check_jst_bound, check_split_bound, check_square_free_identity, generic_theta_ranks, jst_defining_functions,
    sample_points, square_free_part_family, zero_set_mismatches, JstFunctions, SquareFreeCheck, SquareFreeFamily,
    MAX_PRODUCTS,
};
