//! Run several flow variants on one instance through the command line
//! front end and print the comparison table.

use bordered_flow::cli::run;

fn main() {
    let mesh = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pants.json");
    let metric = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pants_metric.json");
    let args = [
        "bordered-flow", "compare", "--mesh", mesh, "--metric", metric, "--s=-1,0,0.5,1", "--p", "0,1,1.5",
        "--targets", "1,1.5,0.7", "--w0", "0.4,0.4,0.4",
    ];
    let code = run(args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
