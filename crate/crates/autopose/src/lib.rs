//! autopose: batch engine that spreads a handful of precise upper-body
//! keypoint annotations through a whole video and trains a personalized
//! per-joint detector from the result.
//!
//! The numeric core is generic over the scalar type via [`num::Real`];
//! the CLI pipeline instantiates everything at `f32` (see the aliases
//! below), tests use `f64` where oracles want the headroom.

pub mod anno;
pub mod config;
pub mod error;
pub mod geom;
pub mod jsonl;
pub mod num;
pub mod rng;
pub mod video;

pub use anno::{Annotation, AnnotationSet, JointId, Origin, Provenance, Status, ALL_JOINTS};
pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use geom::{Point2, Rect};
pub use num::Real;
pub use video::{Frame, FrameStore, GroundTruth};

/// Scalar type the CLI pipeline runs at.
pub type Scalar = f32;

pub type Point2f = Point2<f32>;
pub type Point2d = Point2<f64>;
pub type AnnotationF = Annotation<Scalar>;
pub type AnnotationSetF = AnnotationSet<Scalar>;
pub type GroundTruthF = GroundTruth<Scalar>;
pub mod cli;
