//! Running the command-line driver in-process.

use einstein_lab::cli::run;

fn main() {
    for args in [
        vec!["einstein-lab", "verify", "--family", "cmetric", "--mu", "16", "--nu", "8", "-n", "5"],
        vec!["einstein-lab", "region", "--point", "16,8"],
        vec!["einstein-lab", "sweep", "--path", "cone-to-naked", "--alpha1", "-0.5", "--alpha4", "3"],
        vec!["einstein-lab", "verify", "--family", "cmetric", "--mu", "16"],
    ] {
        let out = run(&args);
        println!("$ {}\nexit {}", args[1..].join(" "), out.exit_code);
        print!("{}{}", out.stdout, out.stderr);
    }
}
