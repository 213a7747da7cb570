//! Equal-measure partitions: segment splitting by inverse distribution
//! functions, the inductive box partition of `I^d`, and pushforwards to
//! rectifiable spaces.

mod boxes;
mod occupancy;
mod segment;
mod space_partition;

pub use boxes::{box_diameter_bound, build_box_partition, BoxPartition, CubeBox, PartitionChecks};
pub use occupancy::{assign_occupancy, digits, grid_order, Occupancy, OccupancyStrategy};
pub use segment::{
    bisect_sup, inverse_cdf, split_segment, AtomicCdf, Cdf1d, FnCdf, PiecewiseLinearCdf, SegmentPartition,
    INVERSE_TOL,
};
pub use space_partition::{
    diameters, pushforward_partition, DiameterKind, DiameterMode, EqualMeasurePartition, FinitePartition,
    SpacePartition,
};
