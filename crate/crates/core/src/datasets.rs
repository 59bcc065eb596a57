//! Small graphs and maps shipped with the library, each with a sidecar of
//! expected properties (`key value` lines).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::format::{parse_graph_file, GraphFile};
use crate::graph::MetricGraph;
use crate::maps::CombinatorialMap;

pub const DATASET_NAMES: &[&str] = &[
    "theta",
    "dumbbell_equal",
    "dumbbell_unequal",
    "rose2",
    "tetrahedron",
    "cube",
    "petersen_projective",
    "heawood_torus",
    "klein_73",
];

#[derive(Clone, Debug)]
pub struct Dataset {
    pub name: &'static str,
    pub file: GraphFile,
    pub graph: MetricGraph,
    /// Present when the file carries a complete rotation system.
    pub map: Option<CombinatorialMap>,
    pub props: BTreeMap<String, String>,
}

impl Dataset {
    pub fn prop(&self, key: &str) -> Option<&str> {
        self.props.get(key).map(String::as_str)
    }

    pub fn prop_usize(&self, key: &str) -> Option<usize> {
        self.prop(key)?.parse().ok()
    }

    pub fn prop_bool(&self, key: &str) -> Option<bool> {
        self.prop(key)?.parse().ok()
    }
}

fn raw(name: &str) -> Option<(&'static str, &'static str, &'static str)> {
    macro_rules! entry {
        ($n:literal, $ext:literal) => {
            (
                $n,
                include_str!(concat!("../data/", $n, ".", $ext)),
                include_str!(concat!("../data/", $n, ".props")),
            )
        };
    }
    let e = match name {
        "theta" => entry!("theta", "graph"),
        "dumbbell_equal" => entry!("dumbbell_equal", "graph"),
        "dumbbell_unequal" => entry!("dumbbell_unequal", "graph"),
        "rose2" => entry!("rose2", "graph"),
        "tetrahedron" => entry!("tetrahedron", "map"),
        "cube" => entry!("cube", "map"),
        "petersen_projective" => entry!("petersen_projective", "map"),
        "heawood_torus" => entry!("heawood_torus", "map"),
        "klein_73" => entry!("klein_73", "map"),
        _ => return None,
    };
    Some(e)
}

pub fn parse_props(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once(char::is_whitespace))
        .map(|(k, v)| (k.to_string(), v.trim().to_string()))
        .collect()
}

pub fn bundled_dataset(name: &str) -> Result<Dataset> {
    let (name, text, props) = raw(name).ok_or_else(|| Error::UnknownDataset(name.to_string()))?;
    let file = parse_graph_file(text)?;
    let map = if file.rotations.is_empty() {
        None
    } else {
        Some(CombinatorialMap::from_file(&file)?)
    };
    Ok(Dataset {
        name,
        graph: file.graph.clone(),
        file,
        map,
        props: parse_props(props),
    })
}
