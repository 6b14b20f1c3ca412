use clap::{Parser, Subcommand};
use starworlds::bench::{bench, BenchOptions};
use starworlds::run::{run_simulate, run_starify, starify, status_str, termination_str};
use starworlds::scenario::{generate_random_scene, load_scenario, save_scenario, write_atomic};
use starworlds::starworld::FormOptions;
use starworlds::Result;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "starworlds", version, about = "Form disjoint star worlds from intersecting obstacles and plan through them")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Form the star world once and write world.txt, validation.txt, world.svg.
    Starify {
        scenario: PathBuf,
        #[arg(long)]
        exclude_obstacle_points: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the planner and write the trajectory, per-frame data and pictures.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        vmax: Option<f64>,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Write a picture of every N-th frame.
        #[arg(long, default_value_t = 25)]
        frame_every: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Generate a random scene.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time star world formation over random scenes and write a CSV.
    Bench {
        #[arg(long, default_value_t = 100)]
        scenes: usize,
        #[arg(long, default_value_t = 5)]
        min_obs: usize,
        #[arg(long, default_value_t = 50)]
        max_obs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exclude_obstacle_points: bool,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Form the star world and print the validation report.
    Validate { scenario: PathBuf },
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Starify { scenario, exclude_obstacle_points, out } => {
            let mut s = load_scenario(&scenario)?;
            s.form.exclude_obstacle_points |= exclude_obstacle_points;
            let r = run_starify(&s, &out)?;
            println!("status={} obstacles={} iterations={}", status_str(r.world.status), r.world.len(), r.world.iterations);
        }
        Cmd::Simulate { scenario, dt, vmax, max_steps, frame_every, out } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(dt) = dt {
                s.planner.dt = dt;
            }
            if let Some(v) = vmax {
                s.planner.v_max = v;
            }
            if let Some(m) = max_steps {
                s.planner.max_steps = m;
            }
            let trace = run_simulate(&s, &out, frame_every)?;
            println!("termination={} steps={}", termination_str(trace.termination), trace.frames.len());
        }
        Cmd::Gen { n, seed, out } => {
            let s = generate_random_scene(n, seed)?;
            save_scenario(&s, &out)?;
        }
        Cmd::Bench { scenes, min_obs, max_obs, seed, exclude_obstacle_points, repeats, out } => {
            let opts = BenchOptions {
                scenes,
                min_obstacles: min_obs,
                max_obstacles: max_obs,
                seed,
                form: FormOptions { exclude_obstacle_points, ..FormOptions::default() },
                repeats,
            };
            let report = bench(&opts)?;
            write_atomic(&out, report.to_csv().as_bytes())?;
            print!("{}", report.summary());
        }
        Cmd::Validate { scenario } => {
            let s = load_scenario(&scenario)?;
            let r = starify(&s)?;
            print!("{}", r.report.to_kv());
            if !r.report.all_pass() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("STARWORLDS_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
