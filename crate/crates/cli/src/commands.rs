//! The five subcommands. Each returns what it wrote so callers and tests can
//! inspect results without re-reading files.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use crossdiff::io::{read_image, read_signal, write_image, write_signal, Image, PgmEncoding};
use crossdiff::noise::standard_normals;
use crossdiff::{
    decompose, edge_map, entropy_raster, evolve, initial_distribution, make_test_pattern, prewitt, psnr_samples,
    snr_samples, DiffusionMatrix, EntropyMode, Error, Field, FilterConfig, Grid, InitialKind, NoiseSpec,
    PatternKind, PsnrMode,
};
use crossdiff::metrics::PEAK_8BIT;

use crate::artifacts::{crop, embed, num, time_tag, Csv, DisplayRange};
use crate::manifest::RunManifest;
use crate::UsageError;

pub const FILTER_D: [f64; 4] = [1.0, 0.9, 1.0, 1.0];
pub const FILTER_TIMES: [f64; 4] = [0.0, 5.0, 10.0, 15.0];
pub const EDGES_D: [f64; 4] = [1.0, 1e-5, 1.99, 1.0];
pub const EDGES_T: f64 = 0.1;
pub const SWEEP_T: f64 = 5.0;
pub const DEMO_D: [f64; 4] = [1.0, 0.1, 1.0, 1.1];
pub const DEMO_TIMES: [f64; 4] = [0.0, 0.25, 2.5, 25.0];
pub const DEMO_HALF_WIDTH: f64 = 100.0;
pub const DEMO_SIZE: usize = 800;
pub const IMAGE_SIZE: usize = 256;

/// Inputs of an image command: the clean image, what is filtered, and what
/// the result is scored against.
#[derive(Clone, Debug)]
pub struct Scene {
    pub clean: Image,
    pub noisy: Image,
    pub reference: Image,
}

fn load_image(m: &RunManifest) -> Result<Image> {
    match (&m.input, &m.pattern) {
        (Some(_), Some(_)) => Err(UsageError::new("give either --input or --pattern, not both").into()),
        (Some(path), None) => Ok(read_image(path)?),
        (None, pattern) => {
            let kind: PatternKind = pattern.as_deref().unwrap_or("phantom").parse()?;
            let n = m.size.unwrap_or(IMAGE_SIZE);
            let f = make_test_pattern(kind, &Grid::pixels(n, n)?);
            Ok(Image::from_field(&f).map(|v| v * PEAK_8BIT))
        }
    }
}

fn add_noise(values: &[f64], spec: Option<NoiseSpec>) -> Vec<f64> {
    match spec {
        Some(spec) if spec.sigma > 0.0 => standard_normals(spec.seed, values.len())
            .into_iter()
            .zip(values)
            .map(|(z, v)| v + spec.sigma * z)
            .collect(),
        _ => values.to_vec(),
    }
}

fn noisy_image(clean: &Image, spec: Option<NoiseSpec>) -> Image {
    Image {
        values: add_noise(&clean.values, spec),
        ..clean.clone()
    }
}

pub fn load_scene(m: &RunManifest) -> Result<Scene> {
    let clean = load_image(m)?;
    let reference = match &m.reference {
        Some(path) => read_image(path)?,
        None => clean.clone(),
    };
    if (reference.width, reference.height) != (clean.width, clean.height) {
        return Err(Error::GridMismatch(format!(
            "reference is {}×{}, input is {}×{}",
            reference.width, reference.height, clean.width, clean.height
        ))
        .into());
    }
    let noisy = noisy_image(&clean, m.noise_spec()?);
    Ok(Scene { clean, noisy, reference })
}

fn unbounded(value: crossdiff::Result<f64>) -> Result<f64> {
    match value {
        Err(Error::DegenerateResidual) => Ok(f64::INFINITY),
        other => Ok(other?),
    }
}

/// SNR and PSNR of `test` against `reference`, `+∞` for an exact match.
pub fn score(reference: &Image, test: &Image, mode: PsnrMode) -> Result<(f64, f64)> {
    Ok((
        unbounded(snr_samples(&reference.values, &test.values))?,
        unbounded(psnr_samples(&reference.values, &test.values, PEAK_8BIT, mode))?,
    ))
}

fn psnr_mode(m: &RunManifest) -> PsnrMode {
    if m.mse_psnr.unwrap_or(false) {
        PsnrMode::MeanSquare
    } else {
        PsnrMode::SumOfSquares
    }
}

fn prepare_output(m: &RunManifest) -> Result<PathBuf> {
    let dir = m.output_dir();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    m.save(&dir.join("manifest.json"))?;
    Ok(dir)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterRow {
    pub t: f64,
    pub snr: f64,
    pub psnr: f64,
    pub entropy: f64,
    /// Mean grey levels over the whole padded domain.
    pub avg_grey_u: f64,
    pub avg_grey_v: f64,
    /// Raw range of `v` inside the image window, mapped to `[0, 255]` for display.
    pub v_min: f64,
    pub v_max: f64,
}

#[derive(Clone, Debug)]
pub struct FilterOutcome {
    pub rows: Vec<FilterRow>,
    pub csv: Csv,
}

/// Filters the input at every time of the grid, stepping from one time to
/// the next, and writes `u_t*.pgm`, `v_t*.pgm` and `metrics.csv`.
pub fn filter(m: &RunManifest) -> Result<FilterOutcome> {
    let d = m.diffusion(FILTER_D)?;
    let kind = m.initial_kind()?;
    let times = m.times(&FILTER_TIMES)?;
    let scene = load_scene(m)?;
    let dir = prepare_output(m)?;
    if m.noise.is_some() {
        write_image(&scene.noisy, &dir.join("noisy.pgm"), PgmEncoding::Binary)?;
    }

    let (padded, window) = embed(&scene.noisy, m.padding()?)?;
    let cfg = FilterConfig::new(d, m.order(), kind, *padded.grid())?;
    let mut state = initial_distribution(&padded, kind)?;
    let mut now = 0.0;
    let mode = psnr_mode(m);
    let raw = m.raw.unwrap_or(false);

    let mut csv = Csv::new(&["t", "snr", "psnr", "entropy", "avg_grey_u", "avg_grey_v", "v_min", "v_max"]);
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        state = evolve(&state, &cfg, t - now)?;
        now = t;
        let u = crop(&state.u, window)?;
        let v = crop(&state.v, window)?;
        let (snr, psnr) = score(&scene.reference, &u, mode)?;
        let range = DisplayRange::of(&v.values);
        let row = FilterRow {
            t,
            snr,
            psnr,
            entropy: entropy_raster(&u.values, u.width, EntropyMode::Histogram),
            avg_grey_u: mean(state.u.values()),
            avg_grey_v: mean(state.v.values()),
            v_min: range.min,
            v_max: range.max,
        };
        let tag = time_tag(t);
        write_image(&u, &dir.join(format!("u_{tag}.pgm")), PgmEncoding::Binary)?;
        write_image(&range.normalize(&v), &dir.join(format!("v_{tag}.pgm")), PgmEncoding::Binary)?;
        if raw {
            write_signal(&u.values, &dir.join(format!("u_{tag}.csv")))?;
            write_signal(&v.values, &dir.join(format!("v_{tag}.csv")))?;
        }
        csv.numbers(&[
            row.t,
            row.snr,
            row.psnr,
            row.entropy,
            row.avg_grey_u,
            row.avg_grey_v,
            row.v_min,
            row.v_max,
        ]);
        rows.push(row);
    }
    csv.write(&dir.join("metrics.csv"))?;
    Ok(FilterOutcome { rows, csv })
}

#[derive(Clone, Debug)]
pub struct EdgesOutcome {
    /// Raw values of the edge map inside the image window.
    pub edges: Image,
    pub prewitt: Image,
    pub edge_range: DisplayRange,
    pub prewitt_range: DisplayRange,
}

/// Writes the small-theta edge map (`edges.pgm`) next to the Prewitt
/// gradient magnitude (`prewitt.pgm`), both display-normalized, and their
/// raw ranges to `edges.csv`.
pub fn edges(m: &RunManifest) -> Result<EdgesOutcome> {
    let d = m.diffusion(EDGES_D)?;
    if m.initial_kind()? != InitialKind::Plain {
        return Err(UsageError::new("edges needs --kind 0").into());
    }
    let t = m.single_time(EDGES_T)?;
    let scene = load_scene(m)?;
    let dir = prepare_output(m)?;

    let (padded, window) = embed(&scene.noisy, m.padding()?)?;
    let cfg = FilterConfig::new(d, m.order(), InitialKind::Plain, *padded.grid())?;
    let edge_field = edge_map(&padded, &cfg, t)?;
    let edges = crop(&edge_field, window)?;
    let prewitt = crop(&prewitt(&padded)?, window)?;
    let edge_range = DisplayRange::of(&edges.values);
    let prewitt_range = DisplayRange::of(&prewitt.values);

    write_image(&edge_range.normalize(&edges), &dir.join("edges.pgm"), PgmEncoding::Binary)?;
    write_image(&prewitt_range.normalize(&prewitt), &dir.join("prewitt.pgm"), PgmEncoding::Binary)?;
    if m.raw.unwrap_or(false) {
        write_signal(&edges.values, &dir.join("edges.csv.raw"))?;
    }
    let mut csv = Csv::new(&["channel", "t", "min", "max"]);
    csv.row(&["edges".to_string(), num(t), num(edge_range.min), num(edge_range.max)]);
    csv.row(&["prewitt".to_string(), num(t), num(prewitt_range.min), num(prewitt_range.max)]);
    csv.write(&dir.join("edges.csv"))?;
    Ok(EdgesOutcome {
        edges,
        prewitt,
        edge_range,
        prewitt_range,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepAxis {
    P(Vec<f64>),
    D(Vec<[f64; 4]>),
    Sigma(Vec<f64>),
}

impl SweepAxis {
    fn name(&self) -> &'static str {
        match self {
            SweepAxis::P(_) => "p",
            SweepAxis::D(_) => "d",
            SweepAxis::Sigma(_) => "sigma",
        }
    }

    fn len(&self) -> usize {
        match self {
            SweepAxis::P(v) | SweepAxis::Sigma(v) => v.len(),
            SweepAxis::D(v) => v.len(),
        }
    }

    fn label(&self, i: usize) -> String {
        match self {
            SweepAxis::P(v) | SweepAxis::Sigma(v) => num(v[i]),
            SweepAxis::D(v) => v[i].map(num).join(";"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub kind: InitialKind,
    pub seed: Option<u64>,
    pub snr: f64,
    pub psnr: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub csv: Csv,
}

/// Runs the filter once per sweep point and initial kind at a single time
/// and writes `sweep.csv`. Along a σ axis point `i` draws its noise from
/// seed `base_seed + i`; along the other axes every point shares the noisy
/// input of the manifest.
pub fn sweep(m: &RunManifest, axis: &SweepAxis, kinds: &[InitialKind], base_seed: u64) -> Result<SweepOutcome> {
    if axis.len() == 0 {
        return Err(UsageError::new(format!("the {} sweep list is empty", axis.name())).into());
    }
    let kinds = if kinds.is_empty() {
        vec![m.initial_kind()?]
    } else {
        kinds.to_vec()
    };
    let t = m.single_time(SWEEP_T)?;
    let margin = m.padding()?;
    let scene = load_scene(m)?;
    let mode = psnr_mode(m);
    let dir = prepare_output(m)?;

    let mut csv = Csv::default();
    match axis {
        SweepAxis::Sigma(_) => csv.comment(&format!("noise seed = base_seed + index, base_seed = {base_seed}")),
        _ => csv.comment(&format!(
            "noise seed = {} for every row",
            m.noise.map_or("none".to_string(), |n| n.seed.to_string())
        )),
    }
    csv.row(&["axis", "value", "kind", "t", "seed", "snr", "psnr"]);

    let mut rows = Vec::new();
    for i in 0..axis.len() {
        let (d, p, noise) = match axis {
            SweepAxis::P(ps) => (m.diffusion(FILTER_D)?, ps[i], m.noise_spec()?),
            SweepAxis::D(ds) => {
                let [a, b, c, e] = ds[i];
                (DiffusionMatrix::new(a, b, c, e)?, m.order(), m.noise_spec()?)
            }
            SweepAxis::Sigma(sigmas) => (
                m.diffusion(FILTER_D)?,
                m.order(),
                Some(NoiseSpec::new(sigmas[i], base_seed + i as u64)?),
            ),
        };
        let noisy = match axis {
            SweepAxis::Sigma(_) => noisy_image(&scene.clean, noise),
            _ => scene.noisy.clone(),
        };
        let (padded, window) = embed(&noisy, margin)?;
        for &kind in &kinds {
            let cfg = FilterConfig::new(d, p, kind, *padded.grid())?;
            let out = evolve(&initial_distribution(&padded, kind)?, &cfg, t)?;
            let (snr, psnr) = score(&scene.reference, &crop(&out.u, window)?, mode)?;
            let row = SweepRow {
                value: axis.label(i),
                kind,
                seed: noise.filter(|n| n.sigma > 0.0).map(|n| n.seed),
                snr,
                psnr,
            };
            csv.row(&[
                axis.name().to_string(),
                row.value.clone(),
                kind.to_string(),
                num(t),
                row.seed.map_or(String::new(), |s| s.to_string()),
                num(snr),
                num(psnr),
            ]);
            rows.push(row);
        }
    }
    csv.write(&dir.join("sweep.csv"))?;
    Ok(SweepOutcome { rows, csv })
}

#[derive(Clone, Debug)]
pub struct Profiles {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    /// `u[k]` and `v[k]` are the profiles at `times[k]`.
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

fn load_signal(m: &RunManifest, half_width: f64) -> Result<Field> {
    match (&m.input, &m.pattern) {
        (Some(_), Some(_)) => Err(UsageError::new("give either --input or --pattern, not both").into()),
        (Some(path), None) => {
            let values = read_signal(path).with_context(|| "demo1d needs a single-column signal")?;
            let grid = Grid::new_1d(half_width, values.len())?;
            Ok(Field::new(grid, values)?)
        }
        (None, pattern) => {
            let kind: PatternKind = pattern.as_deref().unwrap_or("box").parse()?;
            let grid = Grid::new_1d(half_width, m.size.unwrap_or(DEMO_SIZE))?;
            Ok(make_test_pattern(kind, &grid))
        }
    }
}

/// Filters a 1D signal on `(−L, L)` and writes `profiles.csv` with one
/// `u_t*` and one `v_t*` column per time.
pub fn demo1d(m: &RunManifest, half_width: Option<f64>) -> Result<Profiles> {
    let d = m.diffusion(DEMO_D)?;
    let kind = m.initial_kind()?;
    let times = m.times(&DEMO_TIMES)?;
    let f = load_signal(m, half_width.unwrap_or(DEMO_HALF_WIDTH))?;
    let f = Field::new(*f.grid(), add_noise(f.values(), m.noise_spec()?))?;
    let dir = prepare_output(m)?;

    let grid = *f.grid();
    let cfg = FilterConfig::new(d, m.order(), kind, grid)?;
    let pair0 = initial_distribution(&f, kind)?;
    let mut profiles = Profiles {
        x: (0..grid.len()).map(|j| grid.x_axis().coordinate(j)).collect(),
        times: times.clone(),
        u: Vec::new(),
        v: Vec::new(),
    };
    for &t in &times {
        let out = evolve(&pair0, &cfg, t)?;
        profiles.u.push(out.u.into_values());
        profiles.v.push(out.v.into_values());
    }

    let mut header = vec!["x".to_string()];
    for &t in &times {
        header.push(format!("u_{}", time_tag(t)));
        header.push(format!("v_{}", time_tag(t)));
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header);
    for j in 0..grid.len() {
        let mut row = vec![profiles.x[j]];
        for k in 0..times.len() {
            row.push(profiles.u[k][j]);
            row.push(profiles.v[k][j]);
        }
        csv.numbers(&row);
    }
    csv.write(&dir.join("profiles.csv"))?;
    Ok(profiles)
}

/// Text report of the canonical form of `d`.
pub fn decompose_report(d: &DiffusionMatrix) -> String {
    let dec = decompose(d);
    let [l1, l2] = d.eigenvalues();
    let mut out = String::new();
    out.push_str(&format!("d = {}\n", d.matrix()));
    out.push_str(&format!("case = {}\n", dec.case));
    out.push_str(&format!("q = {}\n", d.q()));
    out.push_str(&format!("r = {}\n", d.r()));
    out.push_str(&format!("s = {}\n", d.s()));
    out.push_str(&format!("eigenvalues = {l1}, {l2}\n"));
    out.push_str(&format!("P = {}\n", dec.p));
    out.push_str(&format!("Lambda = {}\n", dec.lambda));
    out
}
