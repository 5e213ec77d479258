//! Configuration, record and snapshot formats, and the command-line surface.

pub mod cli;
pub mod config;
pub mod records;

pub use cli::{run_cli, run_cli_with, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};
pub use config::{parse_config, Config};
pub use records::{
    read_records, read_snapshot, snapshot_from_str, snapshot_to_string, write_records, write_snapshot, RecordRow,
    RunRecord, CSV_HEADER, SNAPSHOT_FORMAT_VERSION,
};
