//! Exact search for weak degeneracy, strictly f-degenerate transversals of
//! DP-covers and Alon-Tarsi orientations on small graphs, together with a catalog
//! of reducible configurations and tools that certify them.

pub mod at;
pub mod audit;
pub mod blocks;
pub mod certify;
pub mod chain;
pub mod coloring;
pub mod config;
pub mod cover;
pub mod degeneracy;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oriented;
pub mod plane;
pub mod script;
pub mod weak;

pub use at::Orientation;
pub use config::{Configuration, Match, Script};
pub use cover::{Cover, FVector, Transversal};
pub use error::{Error, Result};
pub use graph::{Budget, Graph};
pub use plane::{FaceWalk, RotationSystem};
pub use weak::{GameState, RemovalStep, StepKind};
