pub mod corpus;
pub mod domain;
pub mod error;
pub mod gallery;
pub mod geom;
pub mod grid;
pub mod kernel;
pub mod polygon;
pub mod region;
pub mod scene;
pub mod spindle;
pub mod suite;
pub mod svg;
pub mod theorems;
pub mod visibility;

pub use error::{Error, Result};
