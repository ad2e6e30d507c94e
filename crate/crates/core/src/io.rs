//! Output files. Every file starts with a header naming the tool version and
//! the SHA-256 of the canonical JSON of the configuration that produced it.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::mesh::{BoundaryTag, TriMesh};
use crate::solver::ScalarField;
use crate::{Error, Result};

/// Provenance block written into every output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
}

impl Header {
    pub fn for_config<T: Serialize>(config: &T) -> Result<Self> {
        let bytes = serde_json::to_vec(config)?;
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: hex::encode(Sha256::digest(&bytes)),
        })
    }

    fn csv_comment(&self) -> String {
        format!("# tool={} version={} config_sha256={}\n", self.tool, self.version, self.config_sha256)
    }
}

/// JSON envelope: the header followed by the payload.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: &'a T,
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(())
}

/// Writes `body` as pretty JSON with the header merged in at the top level.
pub fn write_json<T: Serialize>(path: &Path, header: &Header, body: &T) -> Result<()> {
    create_parent(path)?;
    let mut s = serde_json::to_string_pretty(&Envelope { header, body })?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// `node,x,y,u` rows in shortest round-trip float notation.
pub fn field_csv(header: &Header, mesh: &TriMesh, u: &ScalarField) -> Result<String> {
    if u.len() != mesh.nodes().len() {
        return Err(Error::InvalidParameter("field does not match the mesh".into()));
    }
    let mut s = header.csv_comment();
    s.push_str("node,x,y,u\n");
    for (i, z) in mesh.nodes().iter().enumerate() {
        writeln!(s, "{i},{},{},{}", z.re, z.im, u.get(i)).expect("writing to a String");
    }
    Ok(s)
}

pub fn write_field_csv(path: &Path, header: &Header, mesh: &TriMesh, u: &ScalarField) -> Result<()> {
    create_parent(path)?;
    fs::write(path, field_csv(header, mesh, u)?)?;
    Ok(())
}

/// A table with named columns, written as CSV.
pub fn write_table_csv(path: &Path, header: &Header, columns: &[&str], rows: &[Vec<String>]) -> Result<()> {
    create_parent(path)?;
    let mut s = header.csv_comment();
    s.push_str(&columns.join(","));
    s.push('\n');
    for r in rows {
        if r.len() != columns.len() {
            return Err(Error::InvalidParameter("table row width differs from the header".into()));
        }
        s.push_str(&r.join(","));
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

/// Boundary edge with its tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaggedEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

/// JSON description of a mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshDescriptor {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<TaggedEdge>,
}

impl MeshDescriptor {
    pub fn new(mesh: &TriMesh) -> Self {
        let boundary = mesh
            .boundary_edges()
            .into_iter()
            .map(|(nodes, c)| TaggedEdge { nodes, tag: c.map_or(BoundaryTag::Other, |c| mesh.pieces()[c.piece].tag) })
            .collect();
        Self { nodes: mesh.nodes().iter().map(|z| [z.re, z.im]).collect(), triangles: mesh.triangles().to_vec(), boundary }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{annulus_domain, generate, MeshOptions, Sizing};

    #[test]
    fn header_hash_tracks_the_config() {
        let a = Header::for_config(&serde_json::json!({"kappa": -1.0})).unwrap();
        let b = Header::for_config(&serde_json::json!({"kappa": -2.0})).unwrap();
        assert_ne!(a.config_sha256, b.config_sha256);
        assert_eq!(a, Header::for_config(&serde_json::json!({"kappa": -1.0})).unwrap());
        assert_eq!(a.config_sha256.len(), 64);
    }

    #[test]
    fn csv_and_descriptor_cover_the_mesh() {
        let mesh = generate(&annulus_domain(0.3, 0.8).unwrap(), &MeshOptions::new(Sizing::Uniform(0.1))).unwrap();
        let u = ScalarField::new(mesh.nodes().iter().map(|z| z.re).collect()).unwrap();
        let h = Header::for_config(&1).unwrap();
        let csv = field_csv(&h, &mesh, &u).unwrap();
        assert_eq!(csv.lines().count(), mesh.nodes().len() + 2);
        let d = MeshDescriptor::new(&mesh);
        assert!(d.boundary.iter().all(|e| matches!(e.tag, BoundaryTag::Inner | BoundaryTag::Circle)));
        let parsed: f64 = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, mesh.node(0).re);
    }
}
