#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const SUBJECTS: &[&str] = &[
    "a man",
    "a woman",
    "two dogs",
    "a cat",
    "a child",
    "three zebras",
    "a train",
    "a bus",
];
const VERBS: &[&str] = &[
    "standing", "sitting", "running", "eating", "playing", "waiting", "walking",
];
const PLACES: &[&str] = &[
    "on a field",
    "near the water",
    "in a kitchen",
    "at the station",
    "on the street",
    "in the grass",
    "under a tree",
    "beside a table",
];
const EXTRAS: &[&str] = &[
    "",
    "with a ball",
    "in the sun",
    "next to a fence",
    "holding a cup",
];

fn sentence(rng: &mut ChaCha8Rng) -> String {
    let mut s = format!(
        "{} {} {}",
        SUBJECTS.choose(rng).unwrap(),
        VERBS.choose(rng).unwrap(),
        PLACES.choose(rng).unwrap()
    );
    let extra = EXTRAS.choose(rng).unwrap();
    if !extra.is_empty() {
        s.push(' ');
        s.push_str(extra);
    }
    s
}

/// Deterministic synthetic dataset in the CLI's input schema.
pub fn fixture_dataset(images: usize, seed: u64) -> serde_json::Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images: Vec<_> = (0..images)
        .map(|i| {
            let m = rng.gen_range(2..=10);
            let candidates: Vec<String> = (0..m).map(|_| sentence(&mut rng)).collect();
            let references: Vec<String> = (0..5).map(|_| sentence(&mut rng)).collect();
            json!({"id": format!("img{i:03}"), "candidates": candidates, "references": references})
        })
        .collect();
    json!({ "images": images })
}

pub fn write_json(path: &Path, value: &serde_json::Value) {
    std::fs::write(path, serde_json::to_string_pretty(value).unwrap()).unwrap();
}

pub fn capdiv(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_capdiv"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CAPDIV_THREADS", t),
        None => cmd.env_remove("CAPDIV_THREADS"),
    };
    cmd.output().expect("failed to spawn capdiv")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
