//! Subcommand implementations and the JSON report type of the `crstokes`
//! binary.

use clap::ValueEnum;

pub mod commands;
pub mod report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Geometry {
    Equilateral,
    Crisscross,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Bubble,
    Edge,
    Patch,
}
