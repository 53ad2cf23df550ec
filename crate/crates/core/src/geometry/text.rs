//! Declarative text form of a [`DomainSpec`].
//!
//! ```text
//! # nodalshell domain v1
//! kind = pole
//! outer_radius = 1.8
//! epsilon = 0.25
//! centers = 0.0 0.0 1.0; 0.0 0.0 -1.0
//! n = 2
//! m = 1
//! holes = 2
//! sheet_mesh = 16
//! l = 3
//! poles = 1.0 0.0 0.0; -1.0 0.0 0.0
//! pole_clearance = 1.16
//! pole_mesh = 32
//! ```
//!
//! A smoothed domain writes its base keys followed by `smoothed_base`, `delta`
//! and `width`. Derived data (hole count, pole directions) is stored so that a
//! file reproduces the domain bit-exactly without re-running mesh searches.

use crate::error::{Error, Result};
use crate::kv::{KvDoc, KvWriter};

use super::domain::*;
use super::points::{epsilon_upper_bound, SpherePointSet};

pub const HEADER: &str = "nodalshell domain v1";

fn write_base(w: &mut KvWriter, spec: &DomainSpec) -> Result<()> {
    match spec {
        DomainSpec::Ball(b) => {
            w.put("kind", "ball").float("radius", b.radius);
        }
        DomainSpec::Shell(s) => {
            w.put("kind", "shell").float("inner_radius", s.inner).float("outer_radius", s.outer);
        }
        DomainSpec::Fournais(f) => {
            w.put("kind", "fournais");
            write_fournais(w, f);
        }
        DomainSpec::Passage(p) => {
            w.put("kind", "passage");
            write_fournais(w, p.base());
            w.put("n", p.n());
        }
        DomainSpec::Sheet(s) => {
            w.put("kind", "sheet");
            write_sheet(w, s);
        }
        DomainSpec::Pole(p) => {
            w.put("kind", "pole");
            write_sheet(w, p.base());
            w.put("l", p.l())
                .vectors("poles", p.directions())
                .float("pole_clearance", p.clearance())
                .put("pole_mesh", p.mesh_per_edge());
        }
        DomainSpec::Smoothed(_) => {
            return Err(Error::InvalidParameter("nested smoothing is not representable".into()));
        }
    }
    Ok(())
}

fn write_fournais(w: &mut KvWriter, f: &Fournais) {
    w.float("outer_radius", f.outer())
        .float("epsilon", f.epsilon())
        .vectors("centers", f.points().centers());
    if f.epsilon() >= epsilon_upper_bound(f.points()) {
        w.put("relaxed", true);
    }
}

fn write_sheet(w: &mut KvWriter, s: &Sheet) {
    write_fournais(w, s.fournais());
    w.put("n", s.base().n())
        .put("m", s.m())
        .put("holes", s.hole_count())
        .put("sheet_mesh", s.mesh_per_edge());
}

pub fn to_text(spec: &DomainSpec) -> Result<String> {
    let mut w = KvWriter::new(HEADER);
    match spec {
        DomainSpec::Smoothed(s) => {
            write_base(&mut w, s.base())?;
            w.put("smoothed_base", s.base().kind()).float("delta", s.delta()).float("width", s.width());
        }
        other => write_base(&mut w, other)?,
    }
    Ok(w.finish())
}

fn read_fournais(doc: &KvDoc) -> Result<Fournais> {
    let centers = SpherePointSet::new(doc.vectors("centers")?.unwrap_or_default())?;
    let (epsilon, outer) = (doc.require("epsilon")?, doc.require("outer_radius")?);
    if doc.get::<bool>("relaxed")?.unwrap_or(false) {
        make_fournais_relaxed(centers, epsilon, outer)
    } else {
        make_fournais(centers, epsilon, outer)
    }
}

fn read_sheet(doc: &KvDoc) -> Result<Sheet> {
    let passage = make_passage(read_fournais(doc)?, doc.require("n")?)?;
    let m: u32 = doc.require("m")?;
    match (doc.get::<usize>("holes")?, doc.get::<usize>("sheet_mesh")?) {
        (Some(holes), Some(mesh)) => sheet_from_parts(passage, m, holes, mesh),
        _ => make_sheet(passage, m),
    }
}

fn read_base(doc: &KvDoc, kind: &str) -> Result<DomainSpec> {
    Ok(match kind {
        "ball" => Ball::new(doc.require("radius")?)?.into(),
        "shell" => Shell::new(doc.require("inner_radius")?, doc.require("outer_radius")?)?.into(),
        "fournais" => read_fournais(doc)?.into(),
        "passage" => make_passage(read_fournais(doc)?, doc.require("n")?)?.into(),
        "sheet" => read_sheet(doc)?.into(),
        "pole" => {
            let sheet = read_sheet(doc)?;
            let l: u32 = doc.require("l")?;
            match doc.vectors("poles")? {
                Some(dirs) => pole_from_parts(
                    sheet,
                    l,
                    dirs,
                    doc.require("pole_clearance")?,
                    doc.get("pole_mesh")?.unwrap_or(0),
                )?
                .into(),
                None => make_pole(sheet, l)?.into(),
            }
        }
        other => return Err(Error::InvalidParameter(format!("unknown domain kind `{other}`"))),
    })
}

pub fn from_text(text: &str) -> Result<DomainSpec> {
    let doc = KvDoc::parse(text)?;
    let kind: String = doc.require("kind")?;
    let base = read_base(&doc, &kind)?;
    match doc.raw("smoothed_base") {
        None => Ok(base),
        Some(b) if b == kind => Ok(smoothed_unchecked(base, doc.require("delta")?, doc.require("width")?)?.into()),
        Some(b) => Err(Error::InvalidParameter(format!("smoothed_base `{b}` does not match kind `{kind}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relaxed_fournais_round_trip() {
        let f = make_fournais_relaxed(SpherePointSet::axes(), 0.6, 1.8).unwrap();
        let spec: DomainSpec = f.into();
        let text = to_text(&spec).unwrap();
        assert!(text.contains("relaxed = true"));
        assert_eq!(from_text(&text).unwrap(), spec);
        assert!(from_text(&text.replace("relaxed = true\n", "")).is_err());
    }

    #[test]
    fn pole_round_trip_is_exact() {
        let f = make_fournais(SpherePointSet::poles(), 0.1 + 0.2, 1.8).unwrap();
        let pole = make_pole(make_sheet(make_passage(f, 2).unwrap(), 1).unwrap(), 3).unwrap();
        let spec: DomainSpec = smoothed_unchecked(pole.into(), 0.05, 0.01).unwrap().into();
        let text = to_text(&spec).unwrap();
        let back = from_text(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(to_text(&back).unwrap(), text);
    }

    #[test]
    fn simple_kinds_round_trip() {
        for spec in [
            DomainSpec::from(Ball::new(1.0).unwrap()),
            Shell::new(1.0, 1.8).unwrap().into(),
            make_passage(make_fournais(SpherePointSet::axes(), 0.123456789, 1.75).unwrap(), 7).unwrap().into(),
        ] {
            assert_eq!(from_text(&to_text(&spec).unwrap()).unwrap(), spec);
        }
    }

    #[test]
    fn unknown_kind_is_rejected() {
        assert!(from_text("kind = torus\n").is_err());
    }
}
