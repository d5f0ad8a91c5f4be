use geolab::development::PlanarDevelopment;
use geolab::geodesic::{GeodesicCertificate, PathSample};
use geolab::horizon::CrossingSequence;
use geolab::lab::{LemmaReport, Verdict};
use geolab::mesh::MeshDescriptor;
use serde::{Deserialize, Serialize};

pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathRecord {
    pub samples: Vec<PathSample>,
    pub points: Vec<[f64; 3]>,
    pub length: f64,
    pub tc: f64,
    pub certificate: GeodesicCertificate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedDevelopment {
    pub name: String,
    pub development: PlanarDevelopment,
}

/// Everything `analyze` and `verify` produce; `report` renders it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Bundle {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub crossings: Vec<CrossingSequence>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub developments: Vec<NamedDevelopment>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<LemmaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}
