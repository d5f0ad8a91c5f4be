//! Implicit Steiner graph: mesh vertices plus `k` evenly spaced points on
//! every edge, with a straight hop between any two nodes of a common face.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

use crate::mesh::{ConvexMesh, SurfacePoint};
use crate::Vec3;

pub(crate) struct SteinerGraph<'a> {
    mesh: &'a ConvexMesh,
    k: usize,
    source: u32,
    target: u32,
}

/// Result of a graph search: node sequence with the face used by each hop.
#[derive(Debug, Clone)]
pub(crate) struct GraphPath {
    pub length: f64,
    /// Node ids from source to target.
    pub nodes: Vec<u32>,
    /// `faces[i]` is the face of the hop `nodes[i] -> nodes[i + 1]`.
    pub faces: Vec<u32>,
}

impl<'a> SteinerGraph<'a> {
    pub fn new(mesh: &'a ConvexMesh, k: usize) -> Self {
        let n = (mesh.num_vertices() + mesh.edges().len() * k) as u32;
        Self { mesh, k, source: n, target: n + 1 }
    }

    fn node_count(&self) -> usize {
        self.target as usize + 1
    }

    /// Vertex id of a node, when the node is a mesh vertex.
    pub fn as_vertex(&self, node: u32) -> Option<u32> {
        ((node as usize) < self.mesh.num_vertices()).then_some(node)
    }

    fn position(&self, node: u32, p: &Vec3, q: &Vec3) -> Vec3 {
        let nv = self.mesh.num_vertices() as u32;
        if node < nv {
            self.mesh.vertex(node)
        } else if node == self.source {
            *p
        } else if node == self.target {
            *q
        } else {
            let i = (node - nv) as usize;
            let (e, j) = (i / self.k, i % self.k);
            let edge = self.mesh.edge(e as u32);
            let (a, b) = (self.mesh.vertex(edge.v[0]), self.mesh.vertex(edge.v[1]));
            a.lerp(&b, (j + 1) as f64 / (self.k + 1) as f64)
        }
    }

    fn faces_of(&self, node: u32, out: &mut Vec<u32>) {
        out.clear();
        let nv = self.mesh.num_vertices() as u32;
        if node < nv {
            out.extend_from_slice(self.mesh.fan(node));
        } else {
            let e = (node - nv) as usize / self.k;
            out.extend_from_slice(&self.mesh.edge(e as u32).faces);
        }
    }

    fn face_nodes(&self, f: u32, out: &mut Vec<u32>) {
        out.clear();
        let nv = self.mesh.num_vertices() as u32;
        out.extend_from_slice(&self.mesh.triangle(f));
        for e in self.mesh.face_edges(f) {
            let base = nv + e * self.k as u32;
            out.extend(base..base + self.k as u32);
        }
    }

    /// Dijkstra from `p` to `q`, both given in every face containing them.
    /// Ties are broken by node id, so the result is deterministic.
    pub fn shortest(&self, p: &[SurfacePoint], q: &[SurfacePoint]) -> Option<GraphPath> {
        let pp = self.mesh.position(&p[0]);
        let qq = self.mesh.position(&q[0]);
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![(u32::MAX, u32::MAX); n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        let target_faces: Vec<u32> = q.iter().map(|x| x.face).collect();

        dist[self.source as usize] = 0.0;
        heap.push(Reverse((OrderedFloat(0.0), self.source)));
        let mut faces = Vec::new();
        let mut nodes = Vec::new();
        while let Some(Reverse((OrderedFloat(d), u))) = heap.pop() {
            if done[u as usize] {
                continue;
            }
            done[u as usize] = true;
            if u == self.target {
                break;
            }
            let pu = self.position(u, &pp, &qq);
            if u == self.source {
                faces.clear();
                faces.extend(p.iter().map(|x| x.face));
            } else {
                self.faces_of(u, &mut faces);
            }
            for &f in &faces {
                if target_faces.contains(&f) {
                    let nd = d + (qq - pu).norm();
                    if nd < dist[self.target as usize] {
                        dist[self.target as usize] = nd;
                        prev[self.target as usize] = (u, f);
                        heap.push(Reverse((OrderedFloat(nd), self.target)));
                    }
                }
                self.face_nodes(f, &mut nodes);
                for &w in &nodes {
                    if w == u || done[w as usize] {
                        continue;
                    }
                    let nd = d + (self.position(w, &pp, &qq) - pu).norm();
                    if nd < dist[w as usize] {
                        dist[w as usize] = nd;
                        prev[w as usize] = (u, f);
                        heap.push(Reverse((OrderedFloat(nd), w)));
                    }
                }
            }
        }
        if !dist[self.target as usize].is_finite() {
            return None;
        }
        let mut nodes = vec![self.target];
        let mut hop_faces = Vec::new();
        let mut cur = self.target;
        while cur != self.source {
            let (u, f) = prev[cur as usize];
            nodes.push(u);
            hop_faces.push(f);
            cur = u;
        }
        nodes.reverse();
        hop_faces.reverse();
        Some(GraphPath { length: dist[self.target as usize], nodes, faces: hop_faces })
    }
}

/// Spacing of the Steiner points on edge `e` at density `k`.
pub(crate) fn spacing(mesh: &ConvexMesh, e: u32, k: usize) -> f64 {
    let edge = mesh.edge(e);
    (mesh.vertex(edge.v[0]) - mesh.vertex(edge.v[1])).norm() / (k + 1) as f64
}
