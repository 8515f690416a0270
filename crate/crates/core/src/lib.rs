//! Tiling engine for a charged hexagonal monotile: decorated tile tables,
//! patch validation, line and triangle analysis, generators for standard and
//! exotic patches, and a backtracking search over finite regions and tori.

pub mod analysis;
pub mod cli;
pub mod construct;
pub mod format;
pub mod lattice;
pub mod patch;
pub mod search;
pub mod svg;
pub mod tile;
