//! Marked floor diagrams of plane curves and the merged counts built from them.

pub mod diagram;
pub mod merge;
pub mod merged;

pub use diagram::{
    enumerate_diagrams, enumerate_shapes, kontsevich_nd, FloorDiagram, MarkedDiagram, ObjectId,
    Token,
};
pub use merge::{enumerate_merge_configs, unit_shift_graph, MergeConfiguration, MergeGraph};
pub use merged::{
    cached_diagrams, classify, dissolve_specialize, enumerate_merged_diagrams, floor_count,
    MergedDiagram, PairTag, TwinTree,
};
