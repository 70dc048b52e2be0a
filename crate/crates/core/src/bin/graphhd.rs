use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use graphhd::report::{write_cv_report, write_scaling_report};
use graphhd::{
    cross_validate, emit_cv_report, emit_scaling_report, load_tudataset, scaling_benchmark, train_dataset, CvConfig,
    Encoder, EncoderConfig, Error, Model, ReportFormat, ScalingConfig,
};

#[derive(Parser)]
#[command(name = "graphhd", version, about = "Graph classification with hyperdimensional computing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated k-fold cross-validation on a TUDataset.
    Bench {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        encoder: EncoderArgs,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Training-time scaling on Erdős–Rényi datasets of growing graph size.
    Scale {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800,980")]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 0.05)]
        edge_prob: f64,
        #[arg(long, default_value_t = 100)]
        graphs: usize,
        #[arg(long, default_value_t = 2)]
        classes: usize,
        #[command(flatten)]
        encoder: EncoderArgs,
        #[command(flatten)]
        cv: CvArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Train on a whole dataset and save the model.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        encoder: EncoderArgs,
        #[arg(long)]
        model_out: PathBuf,
        /// Store the basis vectors in the model file instead of regenerating
        /// them from the seed.
        #[arg(long)]
        embed_basis: bool,
    },
    /// Classify every graph of a dataset with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        /// Write per-graph predictions as CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print graph count, class count, mean vertices and mean edges.
    Stats {
        #[command(flatten)]
        data: DataArgs,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Directory holding the `<NAME>_*.txt` files.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    name: String,
}

#[derive(Args)]
struct EncoderArgs {
    #[arg(long, default_value_t = 10_000)]
    dim: usize,
    #[arg(long = "pr-iters", default_value_t = 10)]
    pr_iters: usize,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for encoding (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl EncoderArgs {
    fn config(&self) -> EncoderConfig {
        EncoderConfig {
            dim: self.dim,
            seed: self.seed,
            pagerank_iterations: self.pr_iters,
            damping: self.damping,
        }
    }
}

#[derive(Args)]
struct CvArgs {
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Plain shuffled folds instead of class-stratified ones.
    #[arg(long)]
    unstratified: bool,
}

impl CvArgs {
    fn config(&self, seed: u64) -> CvConfig {
        CvConfig {
            folds: self.folds,
            repetitions: self.repeats,
            seed,
            stratified: !self.unstratified,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
}

fn set_threads(threads: Option<usize>) -> Result<(), Error> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("--threads {n}: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Bench {
            data,
            encoder,
            cv,
            output,
        } => {
            set_threads(encoder.threads)?;
            let ds = load_tudataset(&data.dataset, &data.name)?;
            let report = cross_validate(&ds, &encoder.config(), &cv.config(encoder.seed))?;
            eprintln!(
                "{}: accuracy {:.4} ± {:.4}, train {:.6} s/fold, inference {:.3e} s/graph",
                report.dataset,
                report.mean_accuracy,
                report.std_accuracy,
                report.mean_train_time_per_fold,
                report.mean_inference_time_per_graph
            );
            match &output.out {
                Some(path) => emit_cv_report(&report, output.format, path),
                None => write_cv_report(&report, output.format, std::io::stdout().lock(), "<stdout>".as_ref()),
            }
        }
        Command::Scale {
            grid,
            edge_prob,
            graphs,
            classes,
            encoder,
            cv,
            output,
        } => {
            set_threads(encoder.threads)?;
            let scale = ScalingConfig {
                vertex_grid: grid,
                graphs,
                classes,
                edge_prob,
                seed: encoder.seed,
            };
            let report = scaling_benchmark(&scale, &encoder.config(), &cv.config(encoder.seed))?;
            for p in &report.points {
                eprintln!(
                    "n={:>5}  edges {:>9.1}  train {:.6} s/fold",
                    p.n_vertices, p.mean_edges, p.mean_train_time_per_fold
                );
            }
            match &output.out {
                Some(path) => emit_scaling_report(&report, output.format, path),
                None => write_scaling_report(&report, output.format, std::io::stdout().lock(), "<stdout>".as_ref()),
            }
        }
        Command::Train {
            data,
            encoder,
            model_out,
            embed_basis,
        } => {
            set_threads(encoder.threads)?;
            let ds = load_tudataset(&data.dataset, &data.name)?;
            let enc = Encoder::new(encoder.config())?;
            let mut model = train_dataset(&ds, &enc)?;
            if embed_basis {
                model.embed_basis(enc.basis(), ds.max_vertices())?;
            }
            model.save(&model_out)?;
            eprintln!(
                "trained {} classes on {} graphs ({} edgeless skipped) -> {}",
                model.k(),
                model.train_graph_count(),
                model.skipped_edgeless(),
                model_out.display()
            );
            Ok(())
        }
        Command::Predict {
            model,
            data,
            out,
            threads,
        } => {
            set_threads(threads)?;
            let model = Model::load(&model)?;
            let ds = load_tudataset(&data.dataset, &data.name)?;
            let enc = model.encoder()?;
            let graphs: Vec<_> = ds.graphs().iter().collect();
            let predictions = model.predict_all(&graphs, &enc)?;

            let mut sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(std::io::BufWriter::new(
                    std::fs::File::create(path).map_err(|e| Error::Io {
                        path: path.clone(),
                        source: e,
                    })?,
                )),
                None => Box::new(std::io::stdout().lock()),
            };
            let label = out.clone().unwrap_or_else(|| "<stdout>".into());
            let io = |e| Error::Io {
                path: label.clone(),
                source: e,
            };
            writeln!(sink, "graph,predicted,actual,edgeless_fallback").map_err(io)?;
            let mut correct = 0;
            for (i, (p, &actual)) in predictions.iter().zip(ds.labels()).enumerate() {
                correct += usize::from(p.label == actual);
                writeln!(sink, "{i},{},{actual},{}", p.label, p.edgeless_fallback).map_err(io)?;
            }
            sink.flush().map_err(io)?;
            eprintln!(
                "accuracy {:.4} over {} graphs",
                correct as f64 / ds.len() as f64,
                ds.len()
            );
            Ok(())
        }
        Command::Stats { data } => {
            let ds = load_tudataset(&data.dataset, &data.name)?;
            let s = ds.stats()?;
            println!("dataset\tgraphs\tclasses\tavg_vertices\tavg_edges");
            println!(
                "{}\t{}\t{}\t{:.2}\t{:.2}",
                ds.name(),
                s.graph_count,
                s.class_count,
                s.mean_vertices,
                s.mean_edges
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
