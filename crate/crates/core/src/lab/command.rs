//! One serializable record per CLI subcommand, so that a manifest can rerun
//! exactly what produced it.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::chi::{chi_interval_experiment, lab_budget};
use super::manifest::{unix_ms, Artifact, ExperimentManifest, Streams, Toolchain, MANIFEST_SCHEMA_VERSION};
use super::table::Table;
use super::xk::xk_distribution_experiment;
use crate::asymptotics::{f_gap, find_n_in_band_with, ledger, profile, y_bound};
use crate::coupling::{build_conditioned_pair, claim2_experiment, verify_chi_gap_with, verify_pair, write_pair, Claim2Config, Statistic};
use crate::error::{Error, Result};
use crate::graphcore::sample_gnp_half;
use crate::poisson::{shifted_mass_check, IntervalSet};
use crate::util::parse_biguint;

/// Large integers are kept as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Profile {
        n: String,
    },
    FindBand {
        c1: f64,
        c2: f64,
        start: String,
        cap: u64,
    },
    Fgap {
        n: String,
    },
    Ybound {
        n: String,
        #[serde(rename = "A")]
        big_a: String,
    },
    Ledger {
        c: f64,
        n1_hint: String,
        enumerate_cap: u64,
    },
    PoissonShift {
        lambda: f64,
        epsilon: f64,
        set: String,
    },
    Sample {
        n: usize,
        seed: u64,
        dimacs: bool,
    },
    XkDist {
        n: usize,
        k: usize,
        samples: usize,
        seed: u64,
    },
    Couple {
        n: usize,
        a: usize,
        #[serde(rename = "A")]
        big_a: usize,
        r: usize,
        seed: u64,
        max_attempts: u64,
    },
    Claim2 {
        n: usize,
        a: usize,
        #[serde(rename = "A")]
        big_a: usize,
        samples: usize,
        statistic: Statistic,
        seed: u64,
        slack: f64,
    },
    ChiInterval {
        n: usize,
        samples: usize,
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Profile { .. } => "profile",
            Command::FindBand { .. } => "find-band",
            Command::Fgap { .. } => "fgap",
            Command::Ybound { .. } => "ybound",
            Command::Ledger { .. } => "ledger",
            Command::PoissonShift { .. } => "poisson-shift",
            Command::Sample { .. } => "sample",
            Command::XkDist { .. } => "xk-dist",
            Command::Couple { .. } => "couple",
            Command::Claim2 { .. } => "claim2",
            Command::ChiInterval { .. } => "chi-interval",
        }
    }

    /// File stem: the command name plus a short hash of the parameters and budget.
    pub fn stem(&self, budget_ms: u64) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("plain data"));
        h.update(budget_ms.to_le_bytes());
        format!("{}-{}", self.name(), &hex::encode(h.finalize())[..10])
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub budget_ms: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: ExperimentManifest,
    pub manifest_path: PathBuf,
    pub report: Value,
    pub table: Option<Table>,
}

struct Produced {
    report: Value,
    table: Option<Table>,
    extra_files: Vec<String>,
    seed: Option<u64>,
    streams: Option<Streams>,
}

impl Produced {
    fn analytic(report: Value, table: Option<Table>) -> Self {
        Produced { report, table, extra_files: Vec::new(), seed: None, streams: None }
    }
}

fn streams(scheme: &str, count: u64) -> Option<Streams> {
    Some(Streams { scheme: scheme.into(), first: 0, count })
}

fn produce(cmd: &Command, out: &Path, stem: &str, budget_ms: u64) -> Result<Produced> {
    let budget = lab_budget(budget_ms);
    Ok(match cmd {
        Command::Profile { n } => Produced::analytic(serde_json::to_value(profile(parse_biguint(n)?)?)?, None),
        Command::FindBand { c1, c2, start, cap } => {
            Produced::analytic(serde_json::to_value(find_n_in_band_with(*c1, *c2, parse_biguint(start)?, *cap)?)?, None)
        }
        Command::Fgap { n } => Produced::analytic(serde_json::to_value(f_gap(parse_biguint(n)?)?)?, None),
        Command::Ybound { n, big_a } => {
            let rep = y_bound(parse_biguint(n)?, parse_biguint(big_a)?)?;
            let mut t = Table::new(&["t[size]", "log2_sigma[bits]"]);
            for (i, s) in rep.log2_sigma.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), s.to_decimal()]);
            }
            Produced::analytic(serde_json::to_value(&rep)?, Some(t))
        }
        Command::Ledger { c, n1_hint, enumerate_cap } => {
            let rep = ledger(*c, parse_biguint(n1_hint)?, *enumerate_cap)?;
            let mut t = Table::new(&["i[index]", "n[vertices]", "a[vertices]", "x[exponent]", "r[count]"]);
            for (i, s) in rep.steps.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), s.n.to_string(), s.a.to_string(), s.x.to_decimal(), s.r.to_string()]);
            }
            Produced::analytic(serde_json::to_value(&rep)?, Some(t))
        }
        Command::PoissonShift { lambda, epsilon, set } => {
            let set: IntervalSet = set.parse()?;
            Produced::analytic(serde_json::to_value(shifted_mass_check(*lambda, &set, *epsilon)?)?, None)
        }
        Command::Sample { n, seed, dimacs } => {
            let g = sample_gnp_half(*n, *seed, 0)?;
            let bin = format!("{stem}.bin");
            std::fs::write(out.join(&bin), g.to_bytes())?;
            let mut extra_files = vec![bin.clone()];
            if *dimacs {
                let name = format!("{stem}.col");
                let mut f = std::io::BufWriter::new(std::fs::File::create(out.join(&name))?);
                g.write_dimacs(&mut f)?;
                drop(f);
                extra_files.push(name);
            }
            Produced {
                report: json!({ "seed": seed, "stream": 0, "graph": g.summary(), "files": extra_files }),
                table: None,
                extra_files,
                seed: Some(*seed),
                streams: streams("the graph uses stream 0", 1),
            }
        }
        Command::XkDist { n, k, samples, seed } => {
            let rep = xk_distribution_experiment(*n, *k, *samples, *seed)?;
            Produced {
                report: serde_json::to_value(&rep)?,
                table: Some(rep.table()),
                extra_files: Vec::new(),
                seed: Some(*seed),
                streams: streams("sample i uses stream i", *samples as u64),
            }
        }
        Command::Couple { n, a, big_a, r, seed, max_attempts } => {
            let pair = build_conditioned_pair(*n, *a, *big_a, *r, *seed, *max_attempts)?;
            let files = write_pair(&pair, out, &format!("{stem}.pair"))?;
            let check = verify_pair(&pair)?;
            let gap = verify_chi_gap_with(&pair, budget);
            let extra_files: Vec<String> =
                files.iter().map(|p| p.file_name().expect("file").to_string_lossy().into_owned()).collect();
            Produced {
                report: json!({
                    "n": pair.n,
                    "n_prime": pair.n_prime,
                    "a": pair.a,
                    "A": pair.big_a,
                    "r": pair.r,
                    "seed": pair.seed,
                    "attempts": pair.attempts,
                    "rejections": pair.rejections,
                    "check": check,
                    "check_ok": check.ok(),
                    "chi_gap": gap,
                    "gap_ok": gap.gap_ok(),
                    "files": extra_files,
                }),
                table: None,
                extra_files,
                seed: Some(*seed),
                streams: streams("attempt j uses stream j", pair.attempts),
            }
        }
        Command::Claim2 { n, a, big_a, samples, statistic, seed, slack } => {
            let cfg = Claim2Config { samples: *samples, seed: *seed, slack: *slack, chi_budget: budget, ..Default::default() };
            let rep = claim2_experiment(*n, *a, *big_a, *statistic, &cfg)?;
            let mut t = Table::new(&["sample[index]", "coupled[value]", "reference[value]"]);
            for (i, (h, r)) in rep.coupled_values.iter().zip(&rep.reference_values).enumerate() {
                t.push(vec![i.to_string(), h.to_string(), r.to_string()]);
            }
            Produced {
                report: serde_json::to_value(&rep)?,
                table: Some(t),
                extra_files: Vec::new(),
                seed: Some(*seed),
                streams: streams("sample i: seeds derived from (seed, tag, i); attempt j uses stream j", *samples as u64),
            }
        }
        Command::ChiInterval { n, samples, seed } => {
            let rep = chi_interval_experiment(*n, *samples, *seed, budget)?;
            Produced {
                report: serde_json::to_value(&rep)?,
                table: Some(rep.table()),
                extra_files: Vec::new(),
                seed: Some(*seed),
                streams: streams("sample i uses stream i", *samples as u64),
            }
        }
    })
}

/// Runs `cmd`, writes its report, table and manifest under `opts.out`.
pub fn run(cmd: &Command, opts: &RunOptions) -> Result<RunOutput> {
    std::fs::create_dir_all(&opts.out)?;
    let started = unix_ms();
    let stem = cmd.stem(opts.budget_ms);
    let p = produce(cmd, &opts.out, &stem, opts.budget_ms)?;
    let mut files = p.extra_files;
    let json_name = format!("{stem}.json");
    std::fs::write(opts.out.join(&json_name), serde_json::to_string_pretty(&p.report)? + "\n")?;
    files.push(json_name);
    if let Some(t) = &p.table {
        let csv_name = format!("{stem}.csv");
        std::fs::write(opts.out.join(&csv_name), t.to_csv()?)?;
        files.push(csv_name);
    }
    let artifacts = files.iter().map(|f| Artifact::of(&opts.out, f)).collect::<Result<_>>()?;
    let manifest = ExperimentManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        experiment: cmd.name().into(),
        params: cmd.clone(),
        budget_ms: opts.budget_ms,
        master_seed: p.seed,
        streams: p.streams,
        threads: rayon::current_num_threads(),
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        artifacts,
        toolchain: Toolchain::current(),
    };
    let manifest_path = opts.out.join(format!("{stem}.manifest.json"));
    manifest.write(&manifest_path)?;
    Ok(RunOutput { manifest, manifest_path, report: p.report, table: p.table })
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactMatch {
    pub file: String,
    pub expected: String,
    pub actual: Option<String>,
    pub identical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub experiment: String,
    pub out: PathBuf,
    pub artifacts: Vec<ArtifactMatch>,
    pub identical: bool,
    /// The recorded toolchain differs from the running one.
    pub toolchain_changed: bool,
}

/// Reruns a manifest into `out` and compares every artifact hash.
pub fn replay(manifest_path: &Path, out: &Path) -> Result<ReplayReport> {
    let m = ExperimentManifest::read(manifest_path)?;
    if m.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(Error::Format(format!("manifest schema version {} is not supported", m.schema_version)));
    }
    if out.canonicalize().ok().is_some_and(|o| manifest_path.parent().and_then(|d| d.canonicalize().ok()) == Some(o)) {
        return Err(Error::domain("replay output directory must differ from the manifest's directory"));
    }
    let rerun = run(&m.params, &RunOptions { out: out.to_path_buf(), budget_ms: m.budget_ms })?;
    let artifacts: Vec<ArtifactMatch> = m
        .artifacts
        .iter()
        .map(|a| {
            let actual = rerun.manifest.artifacts.iter().find(|b| b.file == a.file).map(|b| b.sha256.clone());
            ArtifactMatch { file: a.file.clone(), expected: a.sha256.clone(), identical: actual.as_deref() == Some(&a.sha256), actual }
        })
        .collect();
    let identical = artifacts.iter().all(|a| a.identical) && rerun.manifest.artifacts.len() == m.artifacts.len();
    Ok(ReplayReport {
        experiment: m.experiment,
        out: out.to_path_buf(),
        artifacts,
        identical,
        toolchain_changed: m.toolchain != Toolchain::current(),
    })
}
