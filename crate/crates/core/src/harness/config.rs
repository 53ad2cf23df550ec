//! Experiment configuration in the `key = value` text format.
//!
//! ```text
//! # nodalshell experiment v1
//! study = single
//! domain = fournais
//! outer_radius = 1.8
//! centers = fibonacci
//! count = 12
//! epsilon = auto
//! h = 0.05, 0.025
//! k = 3
//! ```
//!
//! Missing keys take their defaults and unknown keys are rejected. [`ExperimentConfig::to_text`]
//! writes every key, and parsing that text gives back an identical value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eigensolve::{Preconditioner, SolverOptions};
use crate::error::{invalid, Error, Result};
use crate::geometry::{epsilon_upper_bound, room_separation_bound, SpherePointSet};
use crate::kv::{KvDoc, KvWriter};
use crate::vec3::Vec3;

use super::fibonacci_centers;

pub const HEADER: &str = "nodalshell experiment v1";

macro_rules! text_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(invalid(format!("unknown {} `{other}`", stringify!($name)))),
                }
            }
        }
    };
}

text_enum!(StudyKind {
    Single => "single",
    PassageSequence => "passage-sequence",
    SheetSequence => "sheet-sequence",
    PoleSequence => "pole-sequence",
    SmoothSequence => "smooth-sequence",
    EpsilonSweep => "epsilon-sweep",
    FindConfig => "find-config",
});

text_enum!(DomainKind {
    Ball => "ball",
    Shell => "shell",
    Fournais => "fournais",
    Passage => "passage",
    Sheet => "sheet",
    Pole => "pole",
    Smoothed => "smoothed",
});

text_enum!(CenterKind {
    Fibonacci => "fibonacci",
    Axes => "axes",
    Poles => "poles",
    Explicit => "explicit",
});

text_enum!(PreconditionerKind {
    Jacobi => "jacobi",
    InnerCg => "inner-cg",
});

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EpsilonSpec {
    /// Half of the reference bound.
    Auto,
    Value(f64),
}

impl fmt::Display for EpsilonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonSpec::Auto => f.write_str("auto"),
            EpsilonSpec::Value(v) => write!(f, "{v:?}"),
        }
    }
}

impl FromStr for EpsilonSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(EpsilonSpec::Auto);
        }
        s.parse().map(EpsilonSpec::Value).map_err(|_| invalid(format!("epsilon must be `auto` or a number, got `{s}`")))
    }
}

/// Search space of the `find-config` study.
///
/// Rows are visited in the order outer radius, center count, epsilon fraction,
/// spacing. With `spacings` empty each row uses the coarsest `h = 1/N` not
/// above `spacing_factor * epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindSpace {
    pub counts: Vec<usize>,
    pub fractions: Vec<f64>,
    pub outers: Vec<f64>,
    pub spacing_factor: f64,
    pub spacings: Vec<f64>,
    pub max_nodes: usize,
    /// Append plain shell rows, one per outer radius and spacing.
    pub shell_rows: bool,
}

impl Default for FindSpace {
    fn default() -> Self {
        Self {
            counts: vec![8, 12, 16],
            fractions: vec![0.5],
            outers: vec![1.8],
            spacing_factor: 0.25,
            spacings: vec![],
            max_nodes: 2_000_000,
            shell_rows: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub study: StudyKind,
    pub domain: DomainKind,
    /// Base of a smoothed domain.
    pub smooth_base: DomainKind,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub centers: CenterKind,
    pub count: usize,
    pub center_list: Vec<Vec3>,
    pub epsilon: EpsilonSpec,
    /// Measure epsilon against the room separation bound instead of the sheet bound.
    pub relaxed: bool,
    pub n: u32,
    pub m: u32,
    /// `0` picks the smallest admissible pole index.
    pub l: u32,
    pub delta: f64,
    pub width: f64,
    pub spacings: Vec<f64>,
    pub k: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub preconditioner: PreconditionerKind,
    pub inner_cg_steps: usize,
    /// `None` means two grid spacings.
    pub margin: Option<f64>,
    pub output: String,
    pub workers: usize,
    /// Swept index values of a sequence study.
    pub values: Vec<f64>,
    pub topology: bool,
    pub find: FindSpace,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let solver = SolverOptions::default();
        Self {
            study: StudyKind::Single,
            domain: DomainKind::Fournais,
            smooth_base: DomainKind::Pole,
            inner_radius: 1.0,
            outer_radius: 1.8,
            centers: CenterKind::Poles,
            count: 2,
            center_list: vec![],
            epsilon: EpsilonSpec::Auto,
            relaxed: false,
            n: 2,
            m: 1,
            l: 0,
            delta: 0.0,
            width: 0.0,
            spacings: vec![0.1],
            k: 3,
            tol: solver.tol,
            max_iter: solver.max_iter,
            seed: solver.seed,
            preconditioner: PreconditionerKind::Jacobi,
            inner_cg_steps: 10,
            margin: None,
            output: "out".into(),
            workers: 1,
            values: vec![],
            topology: false,
            find: FindSpace::default(),
        }
    }
}

const KEYS: &[&str] = &[
    "study",
    "domain",
    "smooth_base",
    "inner_radius",
    "outer_radius",
    "centers",
    "count",
    "center_list",
    "epsilon",
    "relaxed",
    "n",
    "m",
    "l",
    "delta",
    "width",
    "h",
    "k",
    "tol",
    "max_iter",
    "seed",
    "preconditioner",
    "inner_cg_steps",
    "margin",
    "output",
    "workers",
    "values",
    "topology",
    "find_counts",
    "find_fractions",
    "find_outer",
    "find_spacing_factor",
    "find_spacings",
    "find_max_nodes",
    "find_shell_rows",
];

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let doc = KvDoc::parse(text)?;
        if let Some(key) = doc.keys().find(|k| !KEYS.contains(k)) {
            return Err(invalid(format!("unknown configuration key `{key}`")));
        }
        let d = Self::default();
        let fd = &d.find;
        let margin = match doc.raw("margin") {
            None | Some("auto") => None,
            Some(_) => Some(doc.require::<f64>("margin")?),
        };
        let cfg = Self {
            study: doc.get("study")?.unwrap_or(d.study),
            domain: doc.get("domain")?.unwrap_or(d.domain),
            smooth_base: doc.get("smooth_base")?.unwrap_or(d.smooth_base),
            inner_radius: doc.get("inner_radius")?.unwrap_or(d.inner_radius),
            outer_radius: doc.get("outer_radius")?.unwrap_or(d.outer_radius),
            centers: doc.get("centers")?.unwrap_or(d.centers),
            count: doc.get("count")?.unwrap_or(d.count),
            center_list: doc.vectors("center_list")?.unwrap_or_default(),
            epsilon: doc.get("epsilon")?.unwrap_or(d.epsilon),
            relaxed: doc.get("relaxed")?.unwrap_or(d.relaxed),
            n: doc.get("n")?.unwrap_or(d.n),
            m: doc.get("m")?.unwrap_or(d.m),
            l: doc.get("l")?.unwrap_or(d.l),
            delta: doc.get("delta")?.unwrap_or(d.delta),
            width: doc.get("width")?.unwrap_or(d.width),
            spacings: doc.list("h")?.unwrap_or(d.spacings),
            k: doc.get("k")?.unwrap_or(d.k),
            tol: doc.get("tol")?.unwrap_or(d.tol),
            max_iter: doc.get("max_iter")?.unwrap_or(d.max_iter),
            seed: doc.get("seed")?.unwrap_or(d.seed),
            preconditioner: doc.get("preconditioner")?.unwrap_or(d.preconditioner),
            inner_cg_steps: doc.get("inner_cg_steps")?.unwrap_or(d.inner_cg_steps),
            margin,
            output: doc.get("output")?.unwrap_or(d.output),
            workers: doc.get("workers")?.unwrap_or(d.workers),
            values: doc.list("values")?.unwrap_or_default(),
            topology: doc.get("topology")?.unwrap_or(d.topology),
            find: FindSpace {
                counts: doc.list("find_counts")?.unwrap_or_else(|| fd.counts.clone()),
                fractions: doc.list("find_fractions")?.unwrap_or_else(|| fd.fractions.clone()),
                outers: doc.list("find_outer")?.unwrap_or_else(|| fd.outers.clone()),
                spacing_factor: doc.get("find_spacing_factor")?.unwrap_or(fd.spacing_factor),
                spacings: doc.list("find_spacings")?.unwrap_or_default(),
                max_nodes: doc.get("find_max_nodes")?.unwrap_or(fd.max_nodes),
                shell_rows: doc.get("find_shell_rows")?.unwrap_or(fd.shell_rows),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut w = KvWriter::new(HEADER);
        w.put("study", self.study)
            .put("domain", self.domain)
            .put("smooth_base", self.smooth_base)
            .float("inner_radius", self.inner_radius)
            .float("outer_radius", self.outer_radius)
            .put("centers", self.centers)
            .put("count", self.count)
            .vectors("center_list", &self.center_list)
            .put("epsilon", self.epsilon)
            .put("relaxed", self.relaxed)
            .put("n", self.n)
            .put("m", self.m)
            .put("l", self.l)
            .float("delta", self.delta)
            .float("width", self.width)
            .floats("h", &self.spacings)
            .put("k", self.k)
            .float("tol", self.tol)
            .put("max_iter", self.max_iter)
            .put("seed", self.seed)
            .put("preconditioner", self.preconditioner)
            .put("inner_cg_steps", self.inner_cg_steps);
        match self.margin {
            Some(v) => w.float("margin", v),
            None => w.put("margin", "auto"),
        };
        w.put("output", &self.output)
            .put("workers", self.workers)
            .floats("values", &self.values)
            .put("topology", self.topology)
            .list("find_counts", &self.find.counts)
            .floats("find_fractions", &self.find.fractions)
            .floats("find_outer", &self.find.outers)
            .float("find_spacing_factor", self.find.spacing_factor)
            .floats("find_spacings", &self.find.spacings)
            .put("find_max_nodes", self.find.max_nodes)
            .put("find_shell_rows", self.find.shell_rows);
        w.finish()
    }

    pub fn validate(&self) -> Result<()> {
        if self.spacings.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(invalid("grid spacings must be positive"));
        }
        if self.k == 0 {
            return Err(invalid("k must be positive"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol must be positive"));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be positive"));
        }
        if self.margin.is_some_and(|v| !(v >= 0.0)) {
            return Err(invalid("margin must be nonnegative"));
        }
        if self.centers == CenterKind::Fibonacci && self.count == 0 {
            return Err(invalid("fibonacci centers need count >= 1"));
        }
        if self.domain == DomainKind::Smoothed && matches!(self.smooth_base, DomainKind::Smoothed) {
            return Err(invalid("smooth_base cannot itself be smoothed"));
        }
        if self.output.contains('\n') {
            return Err(invalid("output path must be a single line"));
        }
        Ok(())
    }

    pub fn center_set(&self) -> Result<SpherePointSet> {
        match self.centers {
            CenterKind::Fibonacci => fibonacci_centers(self.count),
            CenterKind::Axes => Ok(SpherePointSet::axes()),
            CenterKind::Poles => Ok(SpherePointSet::poles()),
            CenterKind::Explicit => SpherePointSet::new(self.center_list.clone()),
        }
    }

    /// Bound that epsilon fractions and `auto` refer to.
    pub fn reference_bound(&self, points: &SpherePointSet) -> f64 {
        if self.relaxed {
            room_separation_bound(points)
        } else {
            epsilon_upper_bound(points)
        }
    }

    pub fn resolve_epsilon(&self, points: &SpherePointSet) -> f64 {
        match self.epsilon {
            EpsilonSpec::Auto => 0.5 * self.reference_bound(points),
            EpsilonSpec::Value(v) => v,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            k: self.k,
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            preconditioner: match self.preconditioner {
                PreconditionerKind::Jacobi => Preconditioner::Jacobi,
                PreconditionerKind::InnerCg => Preconditioner::InnerCg { steps: self.inner_cg_steps },
            },
        }
    }

    pub fn margin_for(&self, h: f64) -> f64 {
        self.margin.unwrap_or(2.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_text();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
        assert_eq!(ExperimentConfig::parse("").unwrap(), cfg);
    }

    #[test]
    fn awkward_values_round_trip_bit_exactly() {
        let cfg = ExperimentConfig {
            study: StudyKind::EpsilonSweep,
            centers: CenterKind::Explicit,
            center_list: vec![[0.0, 0.0, 1.0], [0.6, 0.8, 0.0]],
            epsilon: EpsilonSpec::Value(0.1 + 0.2),
            spacings: vec![1.0 / 3.0, 1.0 / 30.0],
            values: vec![0.9, 0.7, 1e-300],
            margin: Some(2.0 / 30.0),
            seed: u64::MAX,
            ..Default::default()
        };
        let text = cfg.to_text();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.spacings[0].to_bits(), (1.0f64 / 3.0).to_bits());
    }

    #[test]
    fn unknown_key_and_bad_values_rejected() {
        assert!(ExperimentConfig::parse("colour = red\n").is_err());
        assert!(ExperimentConfig::parse("study = everything\n").is_err());
        assert!(ExperimentConfig::parse("h = 0.1, -0.1\n").is_err());
        assert!(ExperimentConfig::parse("epsilon = small\n").is_err());
    }

    #[test]
    fn auto_epsilon_is_half_the_bound() {
        let cfg = ExperimentConfig { centers: CenterKind::Fibonacci, count: 12, ..Default::default() };
        let pts = cfg.center_set().unwrap();
        assert_eq!(cfg.resolve_epsilon(&pts), 0.5 * epsilon_upper_bound(&pts));
        let relaxed = ExperimentConfig { relaxed: true, ..cfg };
        assert_eq!(relaxed.resolve_epsilon(&pts), 0.5 * room_separation_bound(&pts));
    }

    #[test]
    fn study_names_parse_back() {
        for s in StudyKind::ALL {
            assert_eq!(s.as_str().parse::<StudyKind>().unwrap(), *s);
        }
    }
}
