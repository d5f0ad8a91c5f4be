//! ASCII OFF / OBJ readers and writers.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConvexMesh, Provenance};
use crate::{GeoError, Result, Vec3};

/// Reproducibility record for a mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDescriptor {
    pub provenance: Provenance,
    pub vertices: usize,
    pub faces: usize,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_region_faces: Option<usize>,
}

impl MeshDescriptor {
    pub fn of(mesh: &ConvexMesh) -> Self {
        Self {
            provenance: mesh.provenance().clone(),
            vertices: mesh.num_vertices(),
            faces: mesh.num_faces(),
            sha256: mesh.content_hash(),
            graph_region_faces: mesh.graph_region().map(|r| r.iter().filter(|&&b| b).count()),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> GeoError {
    GeoError::Parse { line, message: message.into() }
}

fn fan(poly: &[u32], out: &mut Vec<[u32; 3]>) {
    for k in 1..poly.len() - 1 {
        out.push([poly[0], poly[k], poly[k + 1]]);
    }
}

/// Parses OFF text. Polygons are fan-triangulated.
pub fn read_off(text: &str, source: &str) -> Result<ConvexMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first().is_some_and(|t| *t == "OFF") {
        tokens.remove(0);
    } else {
        return Err(parse_err(ln, "missing OFF header"));
    }
    let (ln, counts) = if tokens.is_empty() {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(ln, "missing counts"))?;
        (ln, l.split_whitespace().collect::<Vec<_>>())
    } else {
        (ln, tokens)
    };
    if counts.len() < 2 {
        return Err(parse_err(ln, "expected vertex and face counts"));
    }
    let nv: usize = counts[0].parse().map_err(|_| parse_err(ln, "bad vertex count"))?;
    let nf: usize = counts[1].parse().map_err(|_| parse_err(ln, "bad face count"))?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(ln, "unexpected end of vertices"))?;
        let c: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(ln, format!("bad coordinate `{t}`"))))
            .collect::<Result<_>>()?;
        if c.len() != 3 {
            return Err(parse_err(ln, "vertex needs three coordinates"));
        }
        vertices.push(Vec3::new(c[0], c[1], c[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(ln, "unexpected end of faces"))?;
        let t: Vec<u32> = l
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| parse_err(ln, format!("bad index `{t}`"))))
            .collect::<Result<_>>()?;
        let k = *t.first().ok_or_else(|| parse_err(ln, "empty face"))? as usize;
        if k < 3 || t.len() < k + 1 {
            return Err(parse_err(ln, "face needs at least three indices"));
        }
        fan(&t[1..=k], &mut triangles);
    }
    ConvexMesh::new(vertices, triangles, Provenance::imported(source))
}

/// Parses OBJ text (`v` and `f` records only). Polygons are fan-triangulated.
pub fn read_obj(text: &str, source: &str) -> Result<ConvexMesh> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(|t| t.parse::<f64>().map_err(|_| parse_err(ln, format!("bad coordinate `{t}`"))))
                    .collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(parse_err(ln, "vertex needs three coordinates"));
                }
                vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let mut poly = Vec::new();
                for t in it {
                    let idx = t.split('/').next().unwrap_or("");
                    let k: i64 = idx.parse().map_err(|_| parse_err(ln, format!("bad index `{t}`")))?;
                    let k = if k < 0 { vertices.len() as i64 + k } else { k - 1 };
                    if k < 0 {
                        return Err(parse_err(ln, format!("index `{t}` out of range")));
                    }
                    poly.push(k as u32);
                }
                if poly.len() < 3 {
                    return Err(parse_err(ln, "face needs at least three indices"));
                }
                fan(&poly, &mut triangles);
            }
            _ => {}
        }
    }
    ConvexMesh::new(vertices, triangles, Provenance::imported(source))
}

/// Reads `.off` or `.obj` by extension.
pub fn read_mesh(path: &Path) -> Result<ConvexMesh> {
    let text = std::fs::read_to_string(path)?;
    let source = path.display().to_string();
    match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()).as_deref() {
        Some("off") => read_off(&text, &source),
        Some("obj") => read_obj(&text, &source),
        _ => Err(GeoError::Precondition(format!("unknown mesh format for {source}, expected .off or .obj"))),
    }
}

pub fn write_off(mesh: &ConvexMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "OFF\n{} {} {}", mesh.num_vertices(), mesh.num_faces(), mesh.edges().len());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?} {:?}", v.x, v.y, v.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    s
}

pub fn write_obj(mesh: &ConvexMesh) -> String {
    let mut s = String::new();
    for v in mesh.vertices() {
        let _ = writeln!(s, "v {:?} {:?} {:?}", v.x, v.y, v.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_round_trip_is_exact() {
        let cube = ConvexMesh::unit_cube();
        let back = read_off(&write_off(&cube), "mem").unwrap();
        assert_eq!(back.vertices(), cube.vertices());
        assert_eq!(back.triangles(), cube.triangles());
    }

    #[test]
    fn obj_quads_are_fanned() {
        let text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n\
                    f 1 4 3 2\nf 1 2 6 5\nf 2 3 7 6\nf 3 4 8 7\nf 4 1 5 8\nf 5 6 7 8\n";
        let m = read_obj(text, "mem").unwrap();
        assert_eq!(m.num_faces(), 12);
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn off_errors_carry_line_numbers() {
        match read_off("OFF\n4 4 0\n0 0 0\n1 x 0\n", "mem") {
            Err(GeoError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}
