//! Subcommands of the `crem` binary.
//!
//! Exit codes: 0 ok, 1 I/O failure, 2 usage or unknown machine, 3 codec or
//! malformed log, 4 topology violation, 5 feedback overflow, 6 replay
//! divergence.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use crem::render::{render_leaf, render_structure};
use crem::{Format, RunConfig, StepError};

use crate::codec::format_outputs;
use crate::eventlog::{read_log, EventLogWriter, LogError};
use crate::registry::{MachineRegistryEntry, Registry, SessionError};

pub const FEEDBACK_CAP_ENV: &str = "CREM_FEEDBACK_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Io = 1,
    Usage = 2,
    Codec = 3,
    Topology = 4,
    Overflow = 5,
    Divergence = 6,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "crem", about = "Run, render and replay composed state machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Mermaid,
}

impl From<FormatArg> for Format {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Dot => Format::Dot,
            FormatArg::Mermaid => Format::Mermaid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Topology of a single base machine.
    Base,
    /// Architecture of a composed machine.
    Flow,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List registered machines.
    List,
    /// Print a diagram of a machine.
    Render {
        machine: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "flow")]
        mode: Mode,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Step a machine through the commands in a file, one per line.
    Run {
        machine: String,
        /// Input file, or `-` for stdin.
        #[arg(long, default_value = "-")]
        input: String,
        /// Event log to append to. An existing log is replayed first.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long)]
        feedback_cap: Option<usize>,
    },
    /// Re-run a logged session on a fresh machine and compare outputs.
    Replay {
        machine: String,
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        feedback_cap: Option<usize>,
    },
}

/// Process-level inputs of one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Value of `CREM_FEEDBACK_CAP`, if set.
    pub env_feedback_cap: Option<String>,
}

/// Flag beats environment beats default.
pub fn resolve_run_config(flag: Option<usize>, env: Option<&str>) -> Result<RunConfig, String> {
    let cap = match (flag, env) {
        (Some(cap), _) => cap,
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{FEEDBACK_CAP_ENV}=`{raw}` is not a positive integer"))?,
        (None, None) => return Ok(RunConfig::default()),
    };
    RunConfig::new(cap).map_err(|e| e.to_string())
}

pub fn run<I, T>(registry: &Registry, args: I, io: Io<'_>) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(io.stderr, "{rendered}");
                Exit::Usage
            } else {
                let _ = write!(io.stdout, "{rendered}");
                Exit::Ok
            };
        }
    };
    let mut ctx = Context { registry, io };
    let result = match cli.command {
        Command::List => ctx.list(),
        Command::Render {
            machine,
            format,
            mode,
            out,
        } => ctx.render(&machine, format.into(), mode, out.as_deref()),
        Command::Run {
            machine,
            input,
            log,
            feedback_cap,
        } => ctx.run(&machine, &input, log.as_deref(), feedback_cap),
        Command::Replay {
            machine,
            log,
            feedback_cap,
        } => ctx.replay(&machine, &log, feedback_cap),
    };
    match result {
        Ok(()) => Exit::Ok,
        Err(Failure(exit, message)) => {
            if !message.is_empty() {
                let _ = writeln!(ctx.io.stderr, "error: {message}");
            }
            exit
        }
    }
}

struct Failure(Exit, String);

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(Exit::Io, e.to_string())
    }
}

impl From<LogError> for Failure {
    fn from(e: LogError) -> Self {
        match e {
            LogError::Malformed { .. } => Failure(Exit::Codec, e.to_string()),
            LogError::Io(e) => e.into(),
        }
    }
}

fn step_failure(line: Option<usize>, e: SessionError) -> Failure {
    let at = line.map(|n| format!("line {n}: ")).unwrap_or_default();
    match e {
        SessionError::Codec(c) => Failure(Exit::Codec, format!("{at}{c}")),
        SessionError::Step(s @ StepError::DisallowedTransition { .. }) => {
            Failure(Exit::Topology, format!("{at}{s}"))
        }
        SessionError::Step(s @ StepError::FeedbackOverflow { .. }) => {
            Failure(Exit::Overflow, format!("{at}{s}"))
        }
    }
}

struct Context<'r, 'a> {
    registry: &'r Registry,
    io: Io<'a>,
}

impl Context<'_, '_> {
    fn entry(&self, machine: &str) -> Result<&MachineRegistryEntry, Failure> {
        self.registry
            .get(machine)
            .ok_or_else(|| Failure(Exit::Usage, format!("unknown machine `{machine}`")))
    }

    fn config(&self, flag: Option<usize>) -> Result<RunConfig, Failure> {
        resolve_run_config(flag, self.io.env_feedback_cap.as_deref()).map_err(|m| Failure(Exit::Usage, m))
    }

    fn list(&mut self) -> Result<(), Failure> {
        for key in self.registry.keys() {
            writeln!(self.io.stdout, "{key}")?;
        }
        Ok(())
    }

    fn render(&mut self, machine: &str, format: Format, mode: Mode, out: Option<&Path>) -> Result<(), Failure> {
        let structure = self.entry(machine)?.start(RunConfig::default()).structure();
        let diagram = match mode {
            Mode::Base => {
                let leaf = structure.as_leaf().ok_or_else(|| {
                    Failure(
                        Exit::Usage,
                        format!("`{machine}` is composed; base mode needs a single base machine"),
                    )
                })?;
                render_leaf(leaf, format)
            }
            Mode::Flow => render_structure(&structure, format).map_err(|e| Failure(Exit::Usage, e.to_string()))?,
        };
        match out {
            Some(path) => fs::write(path, diagram.text)?,
            None => self.io.stdout.write_all(diagram.text.as_bytes())?,
        }
        Ok(())
    }

    fn run(&mut self, machine: &str, input: &str, log: Option<&Path>, cap: Option<usize>) -> Result<(), Failure> {
        let cfg = self.config(cap)?;
        let mut session = self.entry(machine)?.start(cfg);

        let mut writer = match log {
            Some(path) => {
                let previous = read_log(path)?;
                for record in &previous {
                    let step = session
                        .step_line(&record.input)
                        .map_err(|e| step_failure(None, e))?;
                    if step.outputs != record.outputs {
                        return Err(Failure(
                            Exit::Divergence,
                            format!("existing log diverges at seq {}", record.seq),
                        ));
                    }
                }
                Some(EventLogWriter::open(path, previous.len() as u64)?)
            }
            None => None,
        };

        let reader: Box<dyn BufRead + '_> = if input == "-" {
            Box::new(&mut *self.io.stdin)
        } else {
            Box::new(BufReader::new(File::open(input)?))
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let step = session
                .step_line(trimmed)
                .map_err(|e| step_failure(Some(i + 1), e))?;
            writeln!(self.io.stdout, "{}", format_outputs(&step.outputs))?;
            if let Some(w) = writer.as_mut() {
                w.append(&step.input, &step.outputs)?;
            }
        }
        Ok(())
    }

    fn replay(&mut self, machine: &str, log: &Path, cap: Option<usize>) -> Result<(), Failure> {
        let cfg = self.config(cap)?;
        let mut session = self.entry(machine)?.start(cfg);
        if !log.exists() {
            return Err(Failure(Exit::Codec, format!("log {} does not exist", log.display())));
        }
        let records = read_log(log)?;
        for record in &records {
            let step = session.step_line(&record.input).map_err(|e| match e {
                SessionError::Codec(c) => Failure(Exit::Codec, format!("log seq {}: {c}", record.seq)),
                other => step_failure(None, other),
            })?;
            if step.outputs != record.outputs {
                writeln!(self.io.stdout, "divergence at seq {}", record.seq)?;
                writeln!(self.io.stdout, "  logged:   {}", format_outputs(&record.outputs))?;
                writeln!(self.io.stdout, "  replayed: {}", format_outputs(&step.outputs))?;
                return Err(Failure(Exit::Divergence, String::new()));
            }
        }
        writeln!(self.io.stdout, "replayed {} records, no divergence", records.len())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_env() {
        assert_eq!(resolve_run_config(Some(3), Some("9")).unwrap().feedback_cap(), 3);
        assert_eq!(resolve_run_config(None, Some("9")).unwrap().feedback_cap(), 9);
        assert_eq!(resolve_run_config(None, None).unwrap().feedback_cap(), 1000);
        assert!(resolve_run_config(None, Some("many")).is_err());
        assert!(resolve_run_config(Some(0), None).is_err());
        assert!(resolve_run_config(None, Some("0")).is_err());
    }
}
