use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use nodalshell::discretize::voxelize;
use nodalshell::harness::tables::{write_find_csv, write_records_csv, write_sequence_csv};
use nodalshell::harness::vtk::{write_vtk, Field};
use nodalshell::harness::{
    build_domain, find_config, run_sequence, solve_case, ExperimentConfig, RecordStore, ResultRecord, StudyKind,
};
use nodalshell::nodal::nodal_domains;
use nodalshell::oracles::{ball_eigenvalue, choose_r_window, shell_ground_eigenvalue, BallMode};
use nodalshell::topology::{complement_components, full_report, BETTI_VOXEL_LIMIT};

#[derive(Parser)]
#[command(name = "nodalshell", version, about = "Dirichlet spectra and nodal domains of perturbed ball-and-shell domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reference eigenvalues and the admissible outer-radius window.
    Oracle {
        #[arg(long, default_value_t = 1.0)]
        inner: f64,
        #[arg(long, default_value_t = 1.8)]
        outer: f64,
    },
    /// Solve one domain at each grid spacing.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Also write eigenfunctions and nodal labels as VTK.
        #[arg(long)]
        vtk: bool,
    },
    /// Run the sequence study named in the config.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Search for a configuration passing the containment test.
    Find {
        #[command(flatten)]
        common: Common,
    },
    /// Complement components, Euler characteristic and Betti numbers.
    Topology {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid spacings, comma separated; overrides the config.
    #[arg(long, value_delimiter = ',')]
    h: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    margin: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => ExperimentConfig::default(),
        };
        if !self.h.is_empty() {
            cfg.spacings = self.h.clone();
        }
        if let Some(out) = &self.out {
            cfg.output = out.to_string_lossy().into_owned();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.margin.is_some() {
            cfg.margin = self.margin;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = PathBuf::from(&cfg.output);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn store(dir: &Path, records: &[ResultRecord]) -> Result<()> {
    let mut store = RecordStore::open(dir.join("records.ndjson"))?;
    for r in records {
        store.append(r)?;
    }
    Ok(())
}

fn describe(r: &ResultRecord) -> String {
    let lambdas: Vec<String> = r.eigenvalues.iter().map(|v| format!("{v:.6}")).collect();
    match &r.error {
        Some(e) => format!("h={} error: {e}", r.h),
        None => format!(
            "h={} nodes={} lambda=[{}] nodal={:?} certified={:?} verdict={} courant_ok={}",
            r.h,
            r.nodes,
            lambdas.join(", "),
            r.nodal_counts,
            r.certified_counts,
            r.verdict(),
            r.courant_ok
        ),
    }
}

fn oracle(inner: f64, outer: f64) -> Result<()> {
    let b1 = ball_eigenvalue(inner, BallMode::Ground)?;
    let b2 = ball_eigenvalue(inner, BallMode::FirstExcited)?;
    let a1 = shell_ground_eigenvalue(inner, outer)?;
    let (lo, hi) = choose_r_window(inner)?;
    println!("ball ground          {:.9}", b1.value);
    println!("ball first excited   {:.9} (bracket {:.1e})", b2.value, b2.bracket_width);
    println!("shell ground         {:.9}", a1.value);
    println!("outer radius window  ({lo:.9}, {hi:.9})");
    println!("ordering holds       {}", b1.value < a1.value && a1.value < b2.value);
    Ok(())
}

fn solve(cfg: &ExperimentConfig, vtk: bool) -> Result<()> {
    let dir = output_dir(cfg)?;
    let mut records = Vec::new();
    for (i, &h) in cfg.spacings.iter().enumerate() {
        let record = match solve_case(cfg, None, h) {
            Ok(case) => {
                if vtk {
                    let labels = nodal_domains(&case.grid, &case.spectrum.eigenvectors[case.spectrum.len().min(2) - 1])?.labels;
                    let names: Vec<String> = (1..=case.spectrum.len()).map(|j| format!("psi{j}")).collect();
                    let mut fields: Vec<(&str, Field<'_>)> = names
                        .iter()
                        .zip(&case.spectrum.eigenvectors)
                        .map(|(n, v)| (n.as_str(), Field::Scalar(v)))
                        .collect();
                    fields.push(("nodal_labels", Field::Labels(&labels)));
                    let path = dir.join(format!("fields_{i}.vtk"));
                    write_vtk(&case.grid, &fields, &format!("nodalshell h={h}"), &mut create(&path)?)?;
                }
                case.record
            }
            Err(e) => ResultRecord::failed(cfg, None, h, &e),
        };
        println!("{}", describe(&record));
        records.push(record);
    }
    write_records_csv(&records, create(&dir.join("records.csv"))?)?;
    store(&dir, &records)
}

fn sweep(cfg: &ExperimentConfig) -> Result<()> {
    if matches!(cfg.study, StudyKind::Single | StudyKind::FindConfig) {
        bail!("`sweep` needs a sequence study, config has `{}`", cfg.study);
    }
    let dir = output_dir(cfg)?;
    let seq = run_sequence(cfg)?;
    for r in &seq.records {
        println!("index={} {}", r.index.unwrap_or_default(), describe(r));
    }
    for c in &seq.checks {
        println!("h={} lambda2 {:?} along index: {}", c.h, c.direction, if c.holds { "holds" } else { "VIOLATED" });
    }
    write_sequence_csv(&seq, create(&dir.join("sequence.csv"))?)?;
    write_records_csv(&seq.records, create(&dir.join("records.csv"))?)?;
    store(&dir, &seq.records)
}

fn find(cfg: &ExperimentConfig) -> Result<()> {
    let dir = output_dir(cfg)?;
    let outcome = find_config(cfg)?;
    for r in &outcome.log {
        println!(
            "{} R={} M={} eps={:.5} h={:.5} est_nodes={} {:?}",
            r.domain, r.outer, r.count, r.epsilon, r.h, r.estimated_nodes, r.status
        );
    }
    println!("{}", outcome.summary());
    write_find_csv(&outcome, create(&dir.join("find.csv"))?)?;
    let records: Vec<ResultRecord> = outcome.log.iter().filter_map(|r| r.record.clone()).collect();
    store(&dir, &records)
}

fn topology(cfg: &ExperimentConfig) -> Result<()> {
    let dir = output_dir(cfg)?;
    let spec = build_domain(cfg)?;
    let mut reports = Vec::new();
    for &h in &cfg.spacings {
        let grid = voxelize(&spec, h)?;
        let half = spec.bounding_radius() + 2.0 * h;
        let report = if grid.len() <= BETTI_VOXEL_LIMIT { full_report(&grid, half)? } else { complement_components(&grid, half)? };
        println!(
            "h={h} voxels={} components={} J={} resolved={} euler={:?} betti={:?}",
            grid.len(),
            report.components,
            report.j_observed,
            report.resolved,
            report.euler,
            report.betti
        );
        reports.push(report);
    }
    fs::write(dir.join("topology.json"), serde_json::to_string_pretty(&reports)?)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Oracle { inner, outer } => oracle(inner, outer),
        Command::Solve { common, vtk } => solve(&common.load()?, vtk),
        Command::Sweep { common } => sweep(&common.load()?),
        Command::Find { common } => find(&common.load()?),
        Command::Topology { common } => topology(&common.load()?),
    }
}
