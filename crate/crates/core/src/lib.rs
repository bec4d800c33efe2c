//! Symbolic and numerical toolkit for noncommutative symplectic automorphisms of the
//! doubled zigzag quivers and their action on Gibbons-Hermsen phase spaces.

pub mod autom;
pub mod cli;
pub mod error;
pub mod io;
pub mod navigator;
pub mod necklace;
pub mod parse;
pub mod polymat;
pub mod primitive;
pub mod quiver;
pub mod repspace;
pub mod scalar;

pub use error::{Error, Result};
