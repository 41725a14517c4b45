fn main() {
    env_logger::init();
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let code = limitavg_cli::run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
