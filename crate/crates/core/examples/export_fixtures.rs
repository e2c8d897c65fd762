//! Writes the packaged fixtures as LGF/CRV/OBK documents into a directory.
//!
//! cargo run -p legreal-core --example export_fixtures -- fixtures

use std::path::PathBuf;

use legreal_core::fixtures;
use legreal_core::openbook::{CurveRef, OpenBookSpec, WordEntry};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    let pairs = [
        ("diamond", fixtures::diamond_loop(), fixtures::diamond_curve()),
        ("theta", fixtures::theta_with_crossing(), fixtures::theta_curve()),
        ("worked_example", fixtures::worked_example(), fixtures::worked_example_curve()),
        ("wedge_boundary", fixtures::wedge_of_unknots(), fixtures::wedge_boundary_curve()),
    ];
    for (name, g, c) in pairs {
        std::fs::write(dir.join(format!("{name}.lgf.json")), g.to_document())?;
        std::fs::write(dir.join(format!("{name}.crv.json")), c.to_document())?;
    }
    std::fs::write(dir.join("tangential.front.json"), fixtures::tangential_crossing().to_json())?;
    let spec = OpenBookSpec {
        genus: 1,
        boundary: 2,
        word: vec![
            WordEntry { curve: CurveRef::Named("A1_1".into()), sign: 1 },
            WordEntry { curve: CurveRef::Named("B1".into()), sign: -1 },
        ],
    };
    std::fs::write(dir.join("torus_two_boundaries.obk.json"), spec.to_document())?;
    Ok(())
}
