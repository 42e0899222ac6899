#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use risus_core::lexicon::{Lexicons, ResourcePaths};

pub fn resource_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../resources")
}

/// Shipped resources, loaded once per test binary.
pub fn lexicons() -> &'static Lexicons {
    static LEX: OnceLock<Lexicons> = OnceLock::new();
    LEX.get_or_init(|| {
        Lexicons::load(&ResourcePaths::under(resource_root()))
            .expect("shipped resources load")
            .0
    })
}
