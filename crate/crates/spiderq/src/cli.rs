//! Command line interface.

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::doc::SchemaGraphDoc;
use crate::service::{router, AppState};
use crate::session::{self, Format, LoadedSchema, Op, Rendering};
use crate::store::Store;

#[derive(Debug, Parser)]
#[command(name = "spiderq", version, about = "Build spider queries over conceptual schemas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a schema file and report every problem found.
    Validate { file: PathBuf },
    /// Print the schema graph as JSON.
    Graph { file: PathBuf },
    /// Spider from a root type, apply ops, and print the result.
    Spider {
        file: PathBuf,
        #[arg(long)]
        root: String,
        /// `prune:nK` or `respider:nK`, applied in order.
        #[arg(long = "op", value_name = "OP")]
        ops: Vec<Op>,
        #[arg(long, value_enum, default_value = "expr")]
        emit: Format,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, env = "SPIDERQ_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long, env = "SPIDERQ_DATA_DIR", default_value = "spiderq-data")]
        data_dir: PathBuf,
        #[arg(long, env = "SPIDERQ_UI_DIR")]
        ui_dir: Option<PathBuf>,
    },
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 when
/// the input is rejected, 2 on usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn load(file: &PathBuf) -> Result<LoadedSchema, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    LoadedSchema::parse(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), String> {
    match command {
        Command::Validate { file } => {
            load(&file)?;
            writeln!(stdout, "{}: ok", file.display()).map_err(|e| e.to_string())
        }
        Command::Graph { file } => {
            let s = load(&file)?;
            let doc = SchemaGraphDoc::new(&s.graph, &s.schema);
            let text = serde_json::to_string_pretty(&doc).expect("serializable");
            writeln!(stdout, "{text}").map_err(|e| e.to_string())
        }
        Command::Spider { file, root, ops, emit, output } => {
            let s = load(&file)?;
            let mut tree = session::start(&s, &root).map_err(|e| e.to_string())?;
            for op in &ops {
                tree = session::apply(&s, &tree, op).map_err(|e| format!("{op}: {e}"))?;
            }
            let text = Rendering::new(&s.schema, &tree).map_err(|e| e.to_string())?.emit(emit);
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            }
        }
        Command::Serve { listen, data_dir, ui_dir } => serve(listen, data_dir, ui_dir),
    }
}

fn serve(listen: SocketAddr, data_dir: PathBuf, ui_dir: Option<PathBuf>) -> Result<(), String> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .try_init();
    let store = Store::open(&data_dir).map_err(|e| format!("{}: {e}", data_dir.display()))?;
    let app = router(Arc::new(AppState { store, ui_dir }));
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(listen).await.map_err(|e| format!("{listen}: {e}"))?;
        tracing::info!(%listen, data_dir = %data_dir.display(), "listening");
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| e.to_string())
    })
}
