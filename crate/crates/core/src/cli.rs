//! Command-line front end. The `mimic` binary forwards to [`main_with_args`].
//!
//! Exit codes: 0 on success, 2 for input or parse errors, 3 for numerical
//! or degenerate-geometry errors.

use crate::audio::{self, AugmentationPlan, FeatureSequence, Snr, DEFAULT_CONTEXT_RADIUS};
use crate::condition::{
    frame_file_name, mouth_exclusion_mask, rasterize_sequence, write_frames, MaskSource, PartMask,
    RenderOptions, RlsConfig,
};
use crate::error::{Error, Result};
use crate::float_image::FloatImage;
use crate::landmarks::{read_landmarks, write_canonical, FacePartition};
use crate::metrics::{ssim_report, SsimParams};
use crate::motion::{retarget_sequence, PartFit, ReferenceFace, RetargetMode, RetargetOptions};
use crate::train::weight_schedule;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Environment variable controlling log verbosity (`error`, `warn`, `info`, ...).
pub const LOG_ENV: &str = "MIMIC_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "mimic",
    version,
    about = "Landmark retargeting and conditioning toolkit"
)]
pub struct Cli {
    /// Pipeline configuration file (TOML). Flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert an extractor export (or canonical file) to the canonical format.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Retarget a driving landmark sequence onto a reference face.
    Retarget(RetargetArgs),
    /// Render landmark frames into condition images.
    Rasterize(RasterizeArgs),
    /// Audio augmentation and feature windowing.
    #[command(subcommand)]
    Audio(AudioCommand),
    /// SSIM between two directories of PNG frames.
    Ssim(SsimArgs),
    /// Print the timestep weight schedule as CSV.
    Weights {
        /// Total number of diffusion steps.
        #[arg(long = "T", value_name = "T")]
        total: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    PartAware,
    FullFaceOnly,
}

#[derive(Debug, Args)]
pub struct RetargetArgs {
    #[arg(long)]
    pub driving: Option<PathBuf>,
    /// Landmark file holding the reference face.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Frame of the reference file to use.
    #[arg(long, default_value_t = 0)]
    pub reference_frame: usize,
    /// Partition file; the bundled face-mesh partition when omitted.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub anchor: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Minimum distinct points for a per-part similarity fit.
    #[arg(long, conflicts_with = "strict_part_fit")]
    pub part_fit_threshold: Option<usize>,
    /// Always fit per-part similarities (no translation fallback).
    #[arg(long)]
    pub strict_part_fit: bool,
    #[arg(long)]
    pub output: PathBuf,
    /// Residual diagnostics file; defaults to `<output stem>.residuals.json`.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RasterizeArgs {
    #[arg(long)]
    pub landmarks: Option<PathBuf>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Enable random part dropping.
    #[arg(long)]
    pub rls: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Drop probability applied to every part.
    #[arg(long)]
    pub drop_prob: Option<f64>,
    /// Draw a new mask for every frame instead of one per clip.
    #[arg(long)]
    pub per_frame: bool,
    /// Draw index used for the per-clip mask.
    #[arg(long, default_value_t = 0)]
    pub clip_id: u64,
    /// Hide the mouth (audio + landmarks mode).
    #[arg(long, conflicts_with_all = ["rls", "mask"])]
    pub drop_mouth: bool,
    /// Fixed mask file `{kept: {part: bool}}`.
    #[arg(long, conflicts_with = "rls")]
    pub mask: Option<PathBuf>,
    #[arg(long)]
    pub width: Option<u32>,
    #[arg(long)]
    pub height: Option<u32>,
    #[arg(long)]
    pub radius: Option<u32>,
    #[arg(long)]
    pub no_edges: bool,
    #[arg(long)]
    pub grayscale: bool,
}

#[derive(Debug, Subcommand)]
pub enum AudioCommand {
    /// Apply gain, shift and noise to a WAV file.
    Augment {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        gain: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        shift: Option<i64>,
        /// Target SNR in dB, or `clean`.
        #[arg(long, allow_negative_numbers = true)]
        snr: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Concatenate neighbouring feature rows. `.json` files use the text
    /// format, anything else the binary one.
    Window {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CONTEXT_RADIUS)]
        window: usize,
    },
}

#[derive(Debug, Args)]
pub struct SsimArgs {
    pub dir_a: PathBuf,
    pub dir_b: PathBuf,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub landmarks: Option<PathBuf>,
    pub partition: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub audio: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

/// Pipeline configuration file. Every randomized step draws from `seed`
/// unless a command-line flag overrides it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub log_level: Option<String>,
    pub paths: Paths,
    pub retarget: RetargetOptions,
    pub rls: RlsConfig,
    pub render: RenderOptions,
    pub augment: AugmentationPlan,
    pub ssim: SsimParams,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_logging(level: Option<&str>) {
    let env = env_logger::Env::new().filter_or(LOG_ENV, level.unwrap_or("warn"));
    let _ = env_logger::Builder::from_env(env).try_init();
}

pub fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    init_logging(config.log_level.as_deref());
    match cli.command {
        Command::Convert { input, output } => cmd_convert(&input, &output),
        Command::Retarget(args) => cmd_retarget(&config, args),
        Command::Rasterize(args) => cmd_rasterize(&config, args),
        Command::Audio(cmd) => cmd_audio(&config, cmd),
        Command::Ssim(args) => cmd_ssim(&config, args),
        Command::Weights { total, output } => cmd_weights(total, output.as_deref()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn required(flag: Option<PathBuf>, config: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
    flag.or_else(|| config.clone())
        .ok_or_else(|| Error::Invalid(format!("missing --{name} (or paths.{name} in config)")))
}

fn load_partition(path: Option<&Path>) -> Result<FacePartition> {
    match path {
        Some(p) => FacePartition::from_json(&read(p)?),
        None => Ok(FacePartition::face_mesh_default()),
    }
}

fn with_context(path: &Path, err: Error) -> Error {
    match err {
        Error::ParseAt { frame, message } => Error::ParseAt {
            frame,
            message: format!("{message} ({})", path.display()),
        },
        other => other,
    }
}

pub fn cmd_convert(input: &Path, output: &Path) -> Result<()> {
    let parsed = read_landmarks(&read(input)?).map_err(|e| with_context(input, e))?;
    if parsed.out_of_range > 0 {
        log::warn!(
            "{}: {} coordinates outside [-0.5, 1.5]",
            input.display(),
            parsed.out_of_range
        );
    }
    write(output, &write_canonical(&parsed.sequence))
}

fn diagnostics_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "retarget".into());
    output.with_file_name(format!("{stem}.residuals.json"))
}

fn cmd_retarget(config: &PipelineConfig, args: RetargetArgs) -> Result<()> {
    let driving_path = required(args.driving, &config.paths.landmarks, "driving")?;
    let reference_path = required(args.reference, &config.paths.reference, "reference")?;
    let partition = load_partition(
        args.partition
            .as_deref()
            .or(config.paths.partition.as_deref()),
    )?;

    let driving = read_landmarks(&read(&driving_path)?)
        .map_err(|e| with_context(&driving_path, e))?
        .sequence;
    let reference_seq = read_landmarks(&read(&reference_path)?)
        .map_err(|e| with_context(&reference_path, e))?
        .sequence;
    let reference = ReferenceFace::from_sequence(&reference_seq, args.reference_frame)?;

    let mut opts = config.retarget;
    if let Some(anchor) = args.anchor {
        opts.anchor_index = anchor;
    }
    match args.mode {
        Some(ModeArg::PartAware) => opts.mode = RetargetMode::PartAware,
        Some(ModeArg::FullFaceOnly) => opts.mode = RetargetMode::FullFaceOnly,
        None => {}
    }
    if args.strict_part_fit {
        opts.part_fit = PartFit::Similarity;
    } else if let Some(t) = args.part_fit_threshold {
        opts.part_fit = PartFit::TranslationFallback(t);
    }

    let result = retarget_sequence(&driving, &reference, &partition, &opts)?;
    write(&args.output, &write_canonical(&result.sequence))?;
    let diagnostics = args
        .diagnostics
        .unwrap_or_else(|| diagnostics_path(&args.output));
    write(&diagnostics, &result.transforms.to_json())
}

/// One entry of the mask audit file.
#[derive(Serialize)]
struct MaskRecord<'a> {
    frame: usize,
    file: String,
    kept: &'a std::collections::BTreeMap<String, bool>,
}

fn cmd_rasterize(config: &PipelineConfig, args: RasterizeArgs) -> Result<()> {
    let landmarks = required(args.landmarks, &config.paths.landmarks, "landmarks")?;
    let out_dir = required(args.out_dir, &config.paths.output_dir, "out-dir")?;
    let partition = load_partition(
        args.partition
            .as_deref()
            .or(config.paths.partition.as_deref()),
    )?;
    let seq = read_landmarks(&read(&landmarks)?)
        .map_err(|e| with_context(&landmarks, e))?
        .sequence;

    let source = if args.drop_mouth {
        MaskSource::Fixed(mouth_exclusion_mask(&partition)?)
    } else if let Some(path) = &args.mask {
        MaskSource::Fixed(PartMask::from_json(&read(path)?)?)
    } else if args.rls {
        let mut cfg = config.rls.clone();
        cfg.seed = args.seed.unwrap_or(config.seed);
        if let Some(p) = args.drop_prob {
            cfg.default_drop_prob = p;
            cfg.drop_prob.clear();
        }
        if args.per_frame {
            cfg.per_clip = false;
        }
        MaskSource::Random {
            cfg,
            clip_id: args.clip_id,
        }
    } else {
        MaskSource::Fixed(PartMask::all_kept(&partition))
    };

    let mut opts = config.render.clone();
    if let Some(w) = args.width {
        opts.width = w;
    }
    if let Some(h) = args.height {
        opts.height = h;
    }
    if let Some(r) = args.radius {
        opts.point_radius = r;
    }
    if args.no_edges {
        opts.draw_edges = false;
    }
    if args.grayscale {
        opts.grayscale = true;
    }

    let rendered = rasterize_sequence(&seq, &partition, &source, &opts)?;
    write_frames(&out_dir, &rendered.images)?;
    let records: Vec<MaskRecord> = rendered
        .masks
        .iter()
        .enumerate()
        .map(|(frame, m)| MaskRecord {
            frame,
            file: frame_file_name(frame),
            kept: &m.kept,
        })
        .collect();
    let mut audit = serde_json::to_vec_pretty(&records)?;
    audit.push(b'\n');
    write(&out_dir.join("masks.json"), &audit)
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn cmd_audio(config: &PipelineConfig, cmd: AudioCommand) -> Result<()> {
    match cmd {
        AudioCommand::Augment {
            input,
            output,
            gain,
            shift,
            snr,
            seed,
        } => {
            let input = required(input, &config.paths.audio, "input")?;
            let mut plan = config.augment.clone();
            plan.seed = seed.unwrap_or(config.seed);
            if let Some(g) = gain {
                plan.gain_db = g;
            }
            if let Some(s) = shift {
                plan.shift_samples = s;
            }
            if let Some(s) = snr {
                plan.snr = s.parse::<Snr>()?;
            }
            let wave = audio::read_wav(&read(&input)?)?;
            let out = plan.apply(&wave)?;
            write(&output, &audio::write_wav(&out)?)
        }
        AudioCommand::Window {
            input,
            output,
            window,
        } => {
            let bytes = read(&input)?;
            let features = if is_json(&input) {
                FeatureSequence::from_json(&bytes)?
            } else {
                FeatureSequence::from_bytes(&bytes)?
            };
            let windowed = audio::context_window(&features, window)?;
            let out = if is_json(&output) {
                windowed.to_json()
            } else {
                windowed.to_bytes()
            };
            write(&output, &out)
        }
    }
}

fn png_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")))
        .collect();
    files.sort();
    Ok(files)
}

/// Loads a PNG as RGB in `[0, 1]`.
pub fn load_png(path: &Path) -> Result<FloatImage> {
    let img = image::open(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?
        .to_rgb8();
    Ok(FloatImage::from_rgb8(&img))
}

fn cmd_ssim(config: &PipelineConfig, args: SsimArgs) -> Result<()> {
    let mut params = config.ssim;
    if let Some(w) = args.window {
        params.window = w;
    }
    if let Some(s) = args.sigma {
        params.sigma = s;
    }
    if let Some(k) = args.k1 {
        params.k1 = k;
    }
    if let Some(k) = args.k2 {
        params.k2 = k;
    }
    let files_a = png_frames(&args.dir_a)?;
    let files_b = png_frames(&args.dir_b)?;
    if files_a.len() != files_b.len() {
        return Err(Error::Invalid(format!(
            "{} has {} frames but {} has {}",
            args.dir_a.display(),
            files_a.len(),
            args.dir_b.display(),
            files_b.len()
        )));
    }
    let a = files_a
        .iter()
        .map(|p| load_png(p))
        .collect::<Result<Vec<_>>>()?;
    let b = files_b
        .iter()
        .map(|p| load_png(p))
        .collect::<Result<Vec<_>>>()?;
    let report = ssim_report(&a, &b, &params)?;
    let mut out = serde_json::to_vec_pretty(&report)?;
    out.push(b'\n');
    emit(args.output.as_deref(), &out)
}

/// CSV `t,weight` rows for `t = 0..=T`.
pub fn weights_csv(total: u64) -> Result<String> {
    let mut csv = String::from("t,weight\n");
    for (t, w) in weight_schedule(total)?.into_iter().enumerate() {
        writeln!(csv, "{t},{w}").expect("writing to a String cannot fail");
    }
    Ok(csv)
}

fn cmd_weights(total: u64, output: Option<&Path>) -> Result<()> {
    emit(output, weights_csv(total)?.as_bytes())
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => write(path, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_rows() {
        let csv = weights_csv(10).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "t,weight");
        assert_eq!(rows[1], "0,1");
        let w5: f64 = rows[6].split(',').nth(1).unwrap().parse().unwrap();
        assert!((w5 - std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-15);
        assert_eq!(rows.len(), 12);
    }

    #[test]
    fn config_parses_partial_toml() {
        let cfg: PipelineConfig = toml::from_str(
            r#"
            seed = 9
            [paths]
            landmarks = "in.json"
            [retarget]
            anchor_index = 2
            mode = "full_face_only"
            [rls]
            default_drop_prob = 0.25
            [render]
            width = 256
            [augment]
            gain_db = -3.0
            snr = { db = 20.0 }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.retarget.anchor_index, 2);
        assert_eq!(cfg.retarget.mode, RetargetMode::FullFaceOnly);
        assert_eq!(cfg.render.width, 256);
        assert_eq!(cfg.render.height, 512);
        assert_eq!(cfg.augment.snr, Snr::Db(20.0));
        assert!(toml::from_str::<PipelineConfig>("bogus = 1").is_err());
    }

    #[test]
    fn diagnostics_default_path() {
        assert_eq!(
            diagnostics_path(Path::new("out/aligned.json")),
            PathBuf::from("out/aligned.residuals.json")
        );
    }
}
