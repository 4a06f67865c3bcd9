//! `pyrotopo`: generate market layouts, measure egress, simulate fire spread
//! and check site plans against the topology rule.
//!
//! Exit codes: 0 success or compliant, 1 non-compliant, 2 usage or input
//! error, 3 no critical-gamma crossing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pyrotopo_core::compliance::{compliance_report, RuleConfig};
use pyrotopo_core::egress::{distance_field, EgressStats, MortalityParams};
use pyrotopo_core::experiment::{rows_to_csv, run_sweep, Metric, SweepFamily, SweepSpec};
use pyrotopo_core::format::rounded_json;
use pyrotopo_core::layout::{
    build_variant, parse_site_plan, serialize_site_plan, BlockSite, FamilyParams, Layout,
};
use pyrotopo_core::propagation::{
    estimate_critical_gamma, simulate_fire, CriticalGammaConfig, FireParams, GammaSearch,
};
use pyrotopo_core::render::{render_distance_field, render_site_plan};

const THREADS_VAR: &str = "PYROTOPO_THREADS";

#[derive(Parser, Debug)]
#[command(name = "pyrotopo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated layout as a site plan.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Distance-to-exterior statistics.
    Egress {
        #[command(flatten)]
        source: LayoutSource,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the distance field as an SVG heatmap.
        #[arg(long)]
        heatmap: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate one fire.
    Fire {
        #[command(flatten)]
        source: LayoutSource,
        #[command(flatten)]
        fire: FireArgs,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Ignition cell as ROW,COL (default: block nearest the centroid).
        #[arg(long, value_parser = parse_site)]
        ignition: Option<BlockSite>,
        #[arg(long)]
        seed: u64,
        /// Also write the burn map as an X/B/. grid.
        #[arg(long)]
        burn_map: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bisect for the critical survival probability gamma_c.
    Gamma {
        #[command(flatten)]
        source: LayoutSource,
        #[command(flatten)]
        fire: FireArgs,
        #[arg(long, value_parser = parse_site)]
        ignition: Option<BlockSite>,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[arg(long, default_value_t = 400)]
        replicates: u64,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a layout against the topology rule; exit 1 when it fails.
    Check {
        #[command(flatten)]
        source: LayoutSource,
        #[arg(long, default_value_t = 50)]
        n_threshold: usize,
        #[arg(long, default_value_t = 2.0)]
        egress_bound: f64,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        #[arg(long, default_value_t = 2)]
        strip_factor: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Metrics over a list of block counts.
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamilyArg,
        /// Comma-separated ascending block counts.
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n_values: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "egress")]
        metrics: Vec<MetricArg>,
        #[command(flatten)]
        fire: FireArgs,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[arg(long, default_value_t = 400)]
        replicates: u64,
        #[arg(long, default_value_t = MortalityParams::DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = MortalityParams::DEFAULT_P0)]
        p0: f64,
        /// Required when gamma_c is requested.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a site plan or its distance field as SVG.
    Render {
        #[command(flatten)]
        source: LayoutSource,
        #[arg(long, value_enum, default_value_t = RenderWhat::Plan)]
        what: RenderWhat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RenderWhat {
    Plan,
    Distance,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyKind {
    Checkerboard,
    Linear,
    DoubleRow,
    Comb,
    HollowRect,
    Zigzag,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepFamilyArg {
    Checkerboard,
    Linear,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Egress,
    Mortality,
    Neighbors,
    #[value(name = "gamma_c")]
    GammaC,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    /// Checkerboard side in cells (even).
    #[arg(long = "L")]
    side: Option<usize>,
    /// Block count (linear), or blocks per row (double-row).
    #[arg(long)]
    n: Option<usize>,
    /// Central aisle width in cells (double-row).
    #[arg(long)]
    aisle: Option<usize>,
    #[arg(long)]
    spine: Option<usize>,
    #[arg(long)]
    tooth: Option<usize>,
    #[arg(long)]
    pitch: Option<usize>,
    /// Outer width in block-widths (hollow-rect).
    #[arg(long)]
    width: Option<usize>,
    /// Outer height in block-widths (hollow-rect).
    #[arg(long)]
    height: Option<usize>,
    /// Blocks per segment (zigzag).
    #[arg(long)]
    segment: Option<usize>,
    #[arg(long)]
    segments: Option<usize>,
    /// Segment spacing in block-widths (zigzag).
    #[arg(long)]
    gap: Option<usize>,
}

#[derive(Args, Debug)]
struct LayoutSource {
    /// Site-plan file ('B' block, '.' aisle).
    #[arg(long, conflicts_with = "family")]
    plan: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Args, Debug)]
struct FireArgs {
    /// Chebyshev dispersal radius in block-widths.
    #[arg(long, default_value_t = 3)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    sparks: u32,
    #[arg(long, default_value_t = 500)]
    max_steps: u64,
    #[arg(long, default_value_t = 0.5)]
    percolation_fraction: f64,
}

impl FireArgs {
    fn params(&self, gamma: f64) -> Result<FireParams> {
        Ok(FireParams::new(
            gamma,
            self.r,
            self.sparks,
            self.max_steps,
            self.percolation_fraction,
        )?)
    }
}

fn parse_site(s: &str) -> std::result::Result<BlockSite, String> {
    let (r, c) = s
        .split_once(',')
        .ok_or_else(|| format!("expected ROW,COL, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok(BlockSite::new(parse(r)?, parse(c)?))
}

impl FamilyArgs {
    fn params(&self) -> Result<FamilyParams> {
        let kind = self.family.ok_or_else(|| anyhow!("--family is required"))?;
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| anyhow!("--{flag} is required for this family"))
        };
        Ok(match kind {
            FamilyKind::Checkerboard => FamilyParams::Checkerboard {
                side: need(self.side, "L")?,
            },
            FamilyKind::Linear => FamilyParams::Linear {
                blocks: need(self.n, "n")?,
            },
            FamilyKind::DoubleRow => FamilyParams::DoubleRow {
                blocks_per_row: need(self.n, "n")?,
                central_aisle: need(self.aisle, "aisle")?,
            },
            FamilyKind::Comb => FamilyParams::Comb {
                spine: need(self.spine, "spine")?,
                tooth: need(self.tooth, "tooth")?,
                pitch: need(self.pitch, "pitch")?,
            },
            FamilyKind::HollowRect => FamilyParams::HollowRect {
                width: need(self.width, "width")?,
                height: need(self.height, "height")?,
            },
            FamilyKind::Zigzag => FamilyParams::Zigzag {
                segment: need(self.segment, "segment")?,
                segments: need(self.segments, "segments")?,
                gap: need(self.gap, "gap")?,
            },
        })
    }

    fn build(&self) -> Result<Layout> {
        Ok(build_variant(&self.params()?)?)
    }
}

impl LayoutSource {
    fn load(&self) -> Result<Layout> {
        match &self.plan {
            Some(path) => read_plan(path),
            None if self.family.family.is_some() => self.family.build(),
            None => bail!("a layout is required: pass --plan FILE or --family ..."),
        }
    }
}

fn read_plan(path: &Path) -> Result<Layout> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let layout = parse_site_plan(&text).with_context(|| format!("site plan {}", path.display()))?;
    Ok(layout.with_name(path.display().to_string()))
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&rounded_json(value)?)?;
    s.push('\n');
    Ok(s)
}

fn ignition_for(layout: &Layout, requested: Option<BlockSite>) -> Result<BlockSite> {
    match requested {
        Some(site) => Ok(site),
        None => layout
            .central_block()
            .ok_or_else(|| anyhow!("layout has no blocks to ignite")),
    }
}

fn egress_text(stats: &EgressStats) -> String {
    use pyrotopo_core::format::sig6;
    let mut s = format!(
        "mean {}\nmax {}\naisle_cells {}\n",
        sig6(stats.mean),
        stats.max,
        stats.aisle_cells
    );
    for bin in &stats.histogram {
        s.push_str(&format!("d {} count {}\n", bin.d, bin.count));
    }
    s
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate { family, output } => {
            let layout = family.build()?;
            write_output(output.as_deref(), &serialize_site_plan(&layout))?;
        }
        Command::Egress {
            source,
            format,
            heatmap,
            output,
        } => {
            let layout = source.load()?;
            let field = distance_field(&layout);
            let stats = EgressStats::from_field(&field)?;
            if stats.unreachable > 0 {
                eprintln!(
                    "pyrotopo: warning: {} aisle cells have no path to the exterior and are excluded",
                    stats.unreachable
                );
            }
            let body = match format {
                Format::Json => to_json(&stats)?,
                Format::Text => egress_text(&stats),
                Format::Svg => render_distance_field(&field),
                Format::Csv => bail!("egress supports json, text or svg output"),
            };
            write_output(output.as_deref(), &body)?;
            if let Some(path) = heatmap {
                write_output(Some(&path), &render_distance_field(&field))?;
            }
        }
        Command::Fire {
            source,
            fire,
            gamma,
            ignition,
            seed,
            burn_map,
            output,
        } => {
            let layout = source.load()?;
            let ignition = ignition_for(&layout, ignition)?;
            let outcome = simulate_fire(&layout, &fire.params(gamma)?, ignition, seed)?;
            write_output(output.as_deref(), &to_json(&outcome)?)?;
            if let Some(path) = burn_map {
                write_output(Some(&path), &outcome.burn_grid(&layout))?;
            }
        }
        Command::Gamma {
            source,
            fire,
            ignition,
            tolerance,
            replicates,
            target,
            seed,
            output,
        } => {
            let layout = source.load()?;
            let ignition = ignition_for(&layout, ignition)?;
            let config = CriticalGammaConfig {
                tolerance,
                replicates_per_probe: replicates,
                target_probability: target,
            };
            let result =
                estimate_critical_gamma(&layout, &fire.params(0.0)?, ignition, &config, seed)?;
            write_output(output.as_deref(), &to_json(&result)?)?;
            if let GammaSearch::NoCrossing { .. } = result {
                return Ok(3);
            }
        }
        Command::Check {
            source,
            n_threshold,
            egress_bound,
            radius,
            strip_factor,
            output,
        } => {
            let layout = source.load()?;
            let cfg = RuleConfig {
                n_threshold,
                egress_bound,
                dispersal_radius: radius,
                strip_path_factor: strip_factor,
            };
            let report = compliance_report(&layout, &cfg)?;
            write_output(output.as_deref(), &to_json(&report)?)?;
            return Ok(u8::from(!report.overall_pass));
        }
        Command::Sweep {
            family,
            n_values,
            metrics,
            fire,
            tolerance,
            replicates,
            lambda,
            p0,
            seed,
            format,
            output,
        } => {
            let metrics: Vec<Metric> = metrics
                .into_iter()
                .map(|m| match m {
                    MetricArg::Egress => Metric::Egress,
                    MetricArg::Mortality => Metric::Mortality,
                    MetricArg::Neighbors => Metric::Neighbors,
                    MetricArg::GammaC => Metric::GammaC,
                })
                .collect();
            if metrics.contains(&Metric::GammaC) && seed.is_none() {
                bail!("--seed is required when gamma_c is requested");
            }
            let spec = SweepSpec {
                family: match family {
                    SweepFamilyArg::Checkerboard => SweepFamily::Checkerboard,
                    SweepFamilyArg::Linear => SweepFamily::Linear,
                },
                n_values,
                metrics,
                fire: Some(fire.params(0.0)?),
                gamma: Some(CriticalGammaConfig {
                    tolerance,
                    replicates_per_probe: replicates,
                    target_probability: 0.5,
                }),
                mortality: Some(MortalityParams::new(lambda, p0)?),
                master_seed: seed,
            };
            let rows = run_sweep(&spec)?;
            for row in &rows {
                if let Some(note) = &row.note {
                    eprintln!("pyrotopo: warning: N={}: {note}", row.n);
                }
            }
            let body = match format {
                Format::Csv => rows_to_csv(&rows),
                Format::Json => to_json(&rows)?,
                _ => bail!("sweep supports csv or json output"),
            };
            write_output(output.as_deref(), &body)?;
        }
        Command::Render {
            source,
            what,
            output,
        } => {
            let layout = source.load()?;
            let svg = match what {
                RenderWhat::Plan => render_site_plan(&layout),
                RenderWhat::Distance => render_distance_field(&distance_field(&layout)),
            };
            write_output(output.as_deref(), &svg)?;
        }
    }
    Ok(0)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| anyhow!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("cannot configure thread pool")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let summary: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect();
            eprintln!("pyrotopo: {}", summary.join(" "));
            return ExitCode::from(2);
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("pyrotopo: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
