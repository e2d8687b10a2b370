#![allow(dead_code)]

use std::path::PathBuf;

use metamorph_core::polar::{parse_polar, PolarSurface};
use metamorph_core::scenario::Simulator;
use metamorph_core::{Airfoils, Airframe, Environment};

pub fn polar_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../polars")
}

pub fn surface(name: &str) -> PolarSurface {
    let mut files: Vec<_> = std::fs::read_dir(polar_dir().join(name))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    let curves = files
        .iter()
        .map(|p| parse_polar(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    PolarSurface::new(name, curves).unwrap()
}

pub fn airfoils() -> Airfoils {
    Airfoils::new(surface("E387"), surface("NACA0010"))
}

pub fn simulator() -> Simulator {
    Simulator::new(Airframe::prototype(), airfoils(), Environment::default())
}
