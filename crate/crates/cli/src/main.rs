//! Command-line front end: structural homeostasis analysis, the associated
//! network transform, DSR and injectivity reports, and numeric sweeps.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crn_core::dsr::{self, DsrOptions};
use crn_core::homeostasis::{self, VerdictKind};
use crn_core::injectivity;
use crn_core::massaction;
use crn_core::model::ReactionNetwork;
use crn_core::numeric;
use crn_core::parser;
use crn_core::CrnError;

#[derive(Parser)]
#[command(
    name = "crn",
    version,
    about = "Reaction-network homeostasis analysis",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural verdict (transform + DSR criterion), optionally followed
    /// by a numeric sweep
    Analyze(AnalyzeArgs),
    /// Print the homeostasis-associated network
    Transform(NetworkArgs),
    /// DSR graph report for the given network
    Dsr(DsrArgs),
    /// Exact subset-product injectivity test
    Injectivity(InjectivityArgs),
    /// Equilibrium branch continuation over the input parameter
    Sweep(SweepArgs),
    /// Print the mass-action differential equations
    Odes(OdesArgs),
}

#[derive(Args)]
struct NetworkArgs {
    /// Path to a network file, or `-` for standard input
    file: PathBuf,
    /// Override the input species by name
    #[arg(long)]
    input: Option<String>,
    /// Override the output species by name
    #[arg(long)]
    output: Option<String>,
    /// Emit machine-readable JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    rates: RateArgs,
    /// Follow the structural verdict with a numeric sweep
    #[arg(long)]
    numeric: bool,
    /// Sweep range as lo:hi:steps (used with --numeric)
    #[arg(long, value_name = "LO:HI:STEPS")]
    zeta: Option<String>,
    /// Random seed for equilibrium multistart
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also print the differential equations
    #[arg(long)]
    dump_odes: bool,
}

#[derive(Args)]
struct DsrArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    caps: CapArgs,
    /// Emit the graph in DOT form (dashed = negative, bold = positive)
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct InjectivityArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    rates: RateArgs,
    /// Sweep range as lo:hi:steps
    #[arg(long, value_name = "LO:HI:STEPS", required = true)]
    zeta: String,
    /// Random seed for equilibrium multistart
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit CSV (zeta, x_1..x_n, detB, detJ, dxn_dzeta, stable)
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct OdesArgs {
    #[command(flatten)]
    net: NetworkArgs,
}

#[derive(Args)]
struct CapArgs {
    /// Abort instead of enumerating more reaction subsets than this
    #[arg(long, default_value_t = injectivity::DEFAULT_SUBSET_CAP)]
    cap_subsets: u128,
    /// Abort instead of enumerating more DSR cycles than this
    #[arg(long, default_value_t = dsr::DEFAULT_CYCLE_CAP)]
    cap_cycles: usize,
    /// Keep reversible pairs as separate DSR nodes
    #[arg(long)]
    split_reversible: bool,
}

impl CapArgs {
    fn options(&self) -> DsrOptions {
        DsrOptions {
            split_reversible: self.split_reversible,
            cycle_cap: self.cap_cycles,
            subset_cap: self.cap_subsets,
        }
    }
}

#[derive(Args)]
struct RateArgs {
    /// Bind one rate symbol, e.g. --rate k3=0.5 (repeatable)
    #[arg(long = "rate", value_name = "NAME=VALUE")]
    rate: Vec<String>,
    /// Default for all unbound rates, e.g. --rates k=1
    #[arg(long = "rates", value_name = "k=VALUE")]
    rates: Option<String>,
}

impl RateArgs {
    fn overrides(&self) -> Result<Vec<(String, f64)>, CrnError> {
        self.rate
            .iter()
            .map(|spec| {
                let (name, value) = spec.split_once('=').ok_or_else(|| {
                    CrnError::Config(format!("--rate expects NAME=VALUE, got `{spec}`"))
                })?;
                let v: f64 = value
                    .parse()
                    .map_err(|_| CrnError::Config(format!("bad rate value `{value}`")))?;
                Ok((name.to_string(), v))
            })
            .collect()
    }

    fn default_rate(&self) -> Result<Option<f64>, CrnError> {
        match &self.rates {
            None => Ok(None),
            Some(spec) => {
                let value = spec.strip_prefix("k=").unwrap_or(spec);
                let v: f64 = value
                    .parse()
                    .map_err(|_| CrnError::Config(format!("bad --rates value `{spec}`")))?;
                Ok(Some(v))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Dsr(args) => cmd_dsr(args),
        Command::Injectivity(args) => cmd_injectivity(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Odes(args) => cmd_odes(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CrnError::CapExceeded { .. } | CrnError::Numeric(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load_network(args: &NetworkArgs) -> Result<ReactionNetwork, CrnError> {
    let text = if args.file.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CrnError::Config(format!("reading standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&args.file)
            .map_err(|e| CrnError::Config(format!("reading {}: {e}", args.file.display())))?
    };
    let mut net = parser::parse_network(&text)?;
    if args.input.is_some() || args.output.is_some() {
        let resolve = |name: &Option<String>, current: usize| -> Result<usize, CrnError> {
            match name {
                None => Ok(current),
                Some(n) => net
                    .species_index(n)
                    .ok_or_else(|| CrnError::Config(format!("unknown species `{n}`"))),
            }
        };
        let input = resolve(&args.input, net.input_species())?;
        let output = resolve(&args.output, net.output_species())?;
        net = net.with_io(input, output)?;
    }
    Ok(net)
}

fn parse_zeta_range(spec: &str) -> Result<(f64, f64, usize), CrnError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CrnError::Config(format!(
            "--zeta expects LO:HI:STEPS, got `{spec}`"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CrnError::Config(format!("bad zeta lower bound `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CrnError::Config(format!("bad zeta upper bound `{}`", parts[1])))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| CrnError::Config(format!("bad zeta step count `{}`", parts[2])))?;
    Ok((lo, hi, steps))
}

#[derive(Serialize)]
struct NetworkEcho {
    text: String,
    species: Vec<String>,
    n_reactions: usize,
    input: String,
    output: String,
    stoich_rank: usize,
}

fn echo(net: &ReactionNetwork) -> NetworkEcho {
    NetworkEcho {
        text: parser::format_network(net),
        species: net.species().iter().map(|s| s.name.clone()).collect(),
        n_reactions: net.n_reactions(),
        input: net.species()[net.input_species()].name.clone(),
        output: net.species()[net.output_species()].name.clone(),
        stoich_rank: net.stoich_subspace_dim(),
    }
}

#[derive(Serialize)]
struct CycleEcho {
    length: usize,
    positive_edges: usize,
    parity: &'static str,
    s_cycle: bool,
    walk: String,
}

fn cycle_echoes(
    net: &ReactionNetwork,
    split: bool,
    report: &dsr::DsrCriterionReport,
) -> Vec<CycleEcho> {
    let graph = dsr::build_dsr(net, split);
    report
        .cycles
        .iter()
        .map(|c| CycleEcho {
            length: c.len,
            positive_edges: c.positive_edges,
            parity: match c.parity {
                dsr::Parity::E => "e",
                dsr::Parity::O => "o",
            },
            s_cycle: c.s_cycle,
            walk: dsr::describe_cycle(net, &graph, c),
        })
        .collect()
}

#[derive(Serialize)]
struct AnalysisReport {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    network: NetworkEcho,
    associated: NetworkEcho,
    permutation: Vec<usize>,
    verdict: VerdictKind,
    conservation_warning: bool,
    diagnostics: Vec<String>,
    injectivity: injectivity::InjectivityReport,
    dsr: Option<DsrEcho>,
    minor_b_det: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<NumericEcho>,
}

#[derive(Serialize)]
struct DsrEcho {
    condition1: bool,
    condition2: bool,
    condition3: bool,
    passes: bool,
    cycles: Vec<CycleEcho>,
    condition1_violations: Vec<usize>,
    condition2_violations: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct NumericEcho {
    zeta_lo: f64,
    zeta_hi: f64,
    steps: usize,
    samples: Vec<numeric::BranchSample>,
    gaps: Vec<numeric::BranchGap>,
    breaks: Vec<numeric::BranchGap>,
    points: Vec<numeric::HomeostasisPoint>,
    point_diagnostics: Vec<String>,
}

fn odes_text(net: &ReactionNetwork) -> Vec<String> {
    let field = massaction::build_rhs(net, true);
    let var_names: Vec<&str> = net.species().iter().map(|s| s.name.as_str()).collect();
    let mut rate_names: Vec<&str> = net
        .reactions()
        .iter()
        .map(|r| r.rate.name.as_str())
        .collect();
    if matches!(field.input_form, massaction::InputForm::Additive { .. }) {
        rate_names.push("zeta");
    }
    field
        .components
        .iter()
        .enumerate()
        .map(|(i, p)| {
            format!(
                "d{}/dt = {}",
                var_names[i],
                p.display_with(&var_names, &rate_names)
            )
        })
        .collect()
}

fn minor_b_text(net: &ReactionNetwork) -> Option<String> {
    let b = homeostasis::minor_b(net);
    let det = b.determinant().ok()?;
    let var_names: Vec<&str> = net.species().iter().map(|s| s.name.as_str()).collect();
    let rate_names: Vec<&str> = net
        .reactions()
        .iter()
        .map(|r| r.rate.name.as_str())
        .collect();
    Some(det.display_with(&var_names, &rate_names))
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CrnError> {
    let started = std::time::Instant::now();
    let net = load_network(&args.net)?;
    let opts = args.caps.options();
    let verdict = homeostasis::structural_verdict(&net, opts)?;
    let assoc = homeostasis::associated_network(&net)?;

    let numeric_echo = if args.numeric {
        let (lo, hi, steps) = match &args.zeta {
            Some(spec) => parse_zeta_range(spec)?,
            None => (0.1, 2.0, 32),
        };
        let overrides = args.rates.overrides()?;
        let default = args.rates.default_rate()?.or(Some(1.0));
        let sweep = numeric::branch_sweep(
            &net,
            &overrides,
            default,
            lo,
            hi,
            steps,
            numeric::SweepOptions {
                attempts: 64,
                seed: args.seed,
            },
        )?;
        let (points, point_diagnostics) =
            numeric::locate_homeostasis_points(&net, &overrides, default, &sweep)?;
        Some(NumericEcho {
            zeta_lo: lo,
            zeta_hi: hi,
            steps,
            samples: sweep.samples,
            gaps: sweep.gaps,
            breaks: sweep.breaks,
            points,
            point_diagnostics,
        })
    } else {
        None
    };

    let report = AnalysisReport {
        tool: "crn",
        version: env!("CARGO_PKG_VERSION"),
        seed: args.seed,
        network: echo(&net),
        associated: echo(&assoc.network),
        permutation: assoc.permutation.clone(),
        verdict: verdict.kind,
        conservation_warning: verdict.conservation_warning,
        diagnostics: verdict.diagnostics.clone(),
        injectivity: verdict.injectivity.clone(),
        dsr: verdict.dsr.as_ref().map(|d| DsrEcho {
            condition1: d.condition1,
            condition2: d.condition2,
            condition3: d.condition3,
            passes: d.passes,
            cycles: cycle_echoes(&assoc.network, args.caps.split_reversible, d),
            condition1_violations: d.condition1_violations.clone(),
            condition2_violations: d.condition2_violations.clone(),
        }),
        minor_b_det: minor_b_text(&net),
        odes: args.dump_odes.then(|| odes_text(&net)),
        numeric: numeric_echo,
    };

    if args.net.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
        return Ok(());
    }

    println!(
        "network ({} species, {} reactions):",
        report.network.species.len(),
        report.network.n_reactions
    );
    print_indented(&report.network.text);
    println!(
        "input: {}   output: {}   stoichiometric rank: {}",
        report.network.input, report.network.output, report.network.stoich_rank
    );
    println!();
    println!("homeostasis-associated network:");
    print_indented(&report.associated.text);
    if let Some(d) = &report.dsr {
        println!("DSR criterion on the associated network:");
        println!(
            "  1. every e-cycle is an s-cycle        {}",
            tick(d.condition1)
        );
        println!(
            "  2. no two e-cycles intersect oddly    {}",
            tick(d.condition2)
        );
        println!(
            "  3. some n-subset product is nonzero   {}",
            tick(d.condition3)
        );
        println!("  cycles found: {}", d.cycles.len());
        for c in &d.cycles {
            println!(
                "    len {:2}  {}-cycle{}  {}",
                c.length,
                c.parity,
                if c.s_cycle { ", s-cycle" } else { "" },
                c.walk
            );
        }
    }
    let inj = &report.injectivity;
    println!(
        "subset products: {} positive, {} negative, {} zero -> {}",
        inj.n_positive,
        inj.n_negative,
        inj.n_zero,
        injectivity_text(inj.verdict)
    );
    for w in &inj.witnesses {
        println!(
            "  witness reactions {:?}: det(sources) = {}, det(source - target) = {}, product = {}",
            w.subset, w.det_source, w.det_diff, w.product
        );
    }
    if let Some(b) = &report.minor_b_det {
        println!("det B (first row and last column of J deleted): {b}");
    }
    if report.conservation_warning {
        println!("warning: the network has a linear conservation law (rank < n); no linearly stable equilibrium exists and the infinitesimal notion does not apply");
    }
    for d in &report.diagnostics {
        println!("note: {d}");
    }
    println!();
    println!("verdict: {}", verdict_text(report.verdict));
    if let Some(odes) = &report.odes {
        println!();
        println!("differential equations:");
        for line in odes {
            println!("  {line}");
        }
    }
    if let Some(num) = &report.numeric {
        println!();
        println!(
            "numeric sweep over zeta in [{}, {}] ({} samples, {} gaps):",
            num.zeta_lo,
            num.zeta_hi,
            num.samples.len(),
            num.gaps.len()
        );
        for p in &num.points {
            match p.kind {
                numeric::PointKind::Infinitesimal => println!(
                    "  homeostasis point: zeta* = {:.9}, x* = {:?}, stable = {}",
                    p.zeta_star, p.x_star, p.stable
                ),
                numeric::PointKind::PerfectInterval { zeta_hi } => println!(
                    "  det B vanishes on the whole interval [{}, {}] (perfect homeostasis), stable = {}",
                    p.zeta_star, zeta_hi, p.stable
                ),
            }
        }
        if num.points.is_empty() {
            println!("  no det B zero crossing on the sampled branch");
        }
        for d in &num.point_diagnostics {
            println!("  note: {d}");
        }
    }
    eprintln!("elapsed: {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn verdict_text(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::NoInfinitesimalHomeostasis => "NO_INFINITESIMAL_HOMEOSTASIS",
        VerdictKind::PerfectHomeostasis => "PERFECT_HOMEOSTASIS",
        VerdictKind::Undetermined => "UNDETERMINED",
    }
}

fn injectivity_text(v: injectivity::InjectivityVerdict) -> &'static str {
    match v {
        injectivity::InjectivityVerdict::Injective => "INJECTIVE",
        injectivity::InjectivityVerdict::NotInjectiveSignConflict => "NOT_INJECTIVE_SIGN_CONFLICT",
        injectivity::InjectivityVerdict::DegenerateAllZero => "DEGENERATE_ALL_ZERO",
    }
}

fn tick(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn print_indented(text: &str) {
    for line in text.lines() {
        println!("  {line}");
    }
}

fn cmd_transform(args: NetworkArgs) -> Result<(), CrnError> {
    let net = load_network(&args)?;
    let assoc = homeostasis::associated_network(&net)?;
    if args.json {
        #[derive(Serialize)]
        struct TransformReport {
            network: NetworkEcho,
            associated: NetworkEcho,
            permutation: Vec<usize>,
            added_rate: String,
        }
        let report = TransformReport {
            network: echo(&net),
            associated: echo(&assoc.network),
            permutation: assoc.permutation.clone(),
            added_rate: assoc.added_rate.clone(),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        print!("{}", parser::format_network(&assoc.network));
    }
    Ok(())
}

fn cmd_dsr(args: DsrArgs) -> Result<(), CrnError> {
    let net = load_network(&args.net)?;
    let graph = dsr::build_dsr(&net, args.caps.split_reversible);
    if args.dot {
        println!("{}", dot_graph(&net, &graph));
        return Ok(());
    }
    let report = dsr::dsr_criterion(&net, args.caps.options())?;
    if args.net.json {
        #[derive(Serialize)]
        struct DsrReport {
            network: NetworkEcho,
            condition1: bool,
            condition2: bool,
            condition3: bool,
            passes: bool,
            cycles: Vec<CycleEcho>,
            condition1_violations: Vec<usize>,
            condition2_violations: Vec<(usize, usize)>,
        }
        let out = DsrReport {
            network: echo(&net),
            condition1: report.condition1,
            condition2: report.condition2,
            condition3: report.condition3,
            passes: report.passes,
            cycles: cycle_echoes(&net, args.caps.split_reversible, &report),
            condition1_violations: report.condition1_violations.clone(),
            condition2_violations: report.condition2_violations.clone(),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
        return Ok(());
    }
    println!(
        "DSR graph: {} species nodes, {} reaction nodes, {} edges",
        graph.n_species,
        graph.reaction_nodes.len(),
        graph.edges.len()
    );
    println!("cycles: {}", report.cycles.len());
    for c in cycle_echoes(&net, args.caps.split_reversible, &report) {
        println!(
            "  len {:2}  {}-cycle{}  {}",
            c.length,
            c.parity,
            if c.s_cycle { ", s-cycle" } else { "" },
            c.walk
        );
    }
    println!(
        "  1. every e-cycle is an s-cycle        {}",
        tick(report.condition1)
    );
    println!(
        "  2. no two e-cycles intersect oddly    {}",
        tick(report.condition2)
    );
    println!(
        "  3. some n-subset product is nonzero   {}",
        tick(report.condition3)
    );
    if report.passes {
        println!("criterion passes: the network is injective");
    } else {
        println!("criterion fails: injectivity not certified by the DSR graph");
    }
    Ok(())
}

fn dot_graph(net: &ReactionNetwork, graph: &dsr::DsrGraph) -> String {
    let mut out = String::from("digraph dsr {\n");
    for s in net.species() {
        out.push_str(&format!(
            "  s{} [label=\"{}\", shape=ellipse];\n",
            s.index, s.name
        ));
    }
    for (i, node) in graph.reaction_nodes.iter().enumerate() {
        let r = &net.reactions()[node.reactions[0]];
        let arrow = if node.reversible { "<->" } else { "->" };
        out.push_str(&format!(
            "  r{} [label=\"{} {} {}\", shape=box];\n",
            i,
            parser::format_complex(&r.source, net),
            arrow,
            parser::format_complex(&r.target, net)
        ));
    }
    for e in &graph.edges {
        let style = match e.sign {
            dsr::Sign::Negative => "style=dashed",
            dsr::Sign::Positive => "style=bold",
        };
        let (from, to, dir) = match (e.species_to_reaction, e.reaction_to_species) {
            (true, true) => (
                format!("s{}", e.species),
                format!("r{}", e.reaction_node),
                "dir=both",
            ),
            (true, false) => (
                format!("s{}", e.species),
                format!("r{}", e.reaction_node),
                "dir=forward",
            ),
            (false, true) => (
                format!("r{}", e.reaction_node),
                format!("s{}", e.species),
                "dir=forward",
            ),
            (false, false) => continue,
        };
        out.push_str(&format!(
            "  {from} -> {to} [{style}, {dir}, label=\"{}\"];\n",
            e.label
        ));
    }
    out.push_str("}\n");
    out
}

fn cmd_injectivity(args: InjectivityArgs) -> Result<(), CrnError> {
    let net = load_network(&args.net)?;
    let report = injectivity::injectivity_verdict(&net, args.caps.cap_subsets)?;
    if args.net.json {
        #[derive(Serialize)]
        struct InjOut {
            network: NetworkEcho,
            verdict: injectivity::InjectivityVerdict,
            n_positive: usize,
            n_negative: usize,
            n_zero: usize,
            witnesses: Vec<injectivity::SubsetProduct>,
            products: Vec<injectivity::SubsetProduct>,
        }
        let products = injectivity::subset_products(&net, args.caps.cap_subsets)?;
        let out = InjOut {
            network: echo(&net),
            verdict: report.verdict,
            n_positive: report.n_positive,
            n_negative: report.n_negative,
            n_zero: report.n_zero,
            witnesses: report.witnesses,
            products,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
        return Ok(());
    }
    println!(
        "subset products over {} reactions choose {} species: {} positive, {} negative, {} zero",
        net.n_reactions(),
        net.n_species(),
        report.n_positive,
        report.n_negative,
        report.n_zero
    );
    for w in &report.witnesses {
        println!(
            "  witness reactions {:?}: det(sources) = {}, det(source - target) = {}, product = {}",
            w.subset, w.det_source, w.det_diff, w.product
        );
    }
    println!("verdict: {}", injectivity_text(report.verdict));
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CrnError> {
    let net = load_network(&args.net)?;
    let (lo, hi, steps) = parse_zeta_range(&args.zeta)?;
    let overrides = args.rates.overrides()?;
    let default = args.rates.default_rate()?.or(Some(1.0));
    let sweep = numeric::branch_sweep(
        &net,
        &overrides,
        default,
        lo,
        hi,
        steps,
        numeric::SweepOptions {
            attempts: 64,
            seed: args.seed,
        },
    )?;
    let (points, point_diagnostics) =
        numeric::locate_homeostasis_points(&net, &overrides, default, &sweep)?;
    if args.csv {
        let names: Vec<String> = net
            .species()
            .iter()
            .map(|s| format!("x_{}", s.name))
            .collect();
        println!("zeta,{},detB,detJ,dxn_dzeta,stable", names.join(","));
        for s in &sweep.samples {
            let xs: Vec<String> = s.equilibrium.x.iter().map(|v| format!("{v}")).collect();
            println!(
                "{},{},{},{},{},{}",
                s.zeta,
                xs.join(","),
                s.det_b,
                s.det_j,
                s.io_derivative,
                s.equilibrium.stable
            );
        }
        return Ok(());
    }
    if args.net.json {
        #[derive(Serialize)]
        struct SweepOut {
            network: NetworkEcho,
            zeta_lo: f64,
            zeta_hi: f64,
            steps: usize,
            seed: u64,
            samples: Vec<numeric::BranchSample>,
            gaps: Vec<numeric::BranchGap>,
            breaks: Vec<numeric::BranchGap>,
            points: Vec<numeric::HomeostasisPoint>,
            point_diagnostics: Vec<String>,
        }
        let out = SweepOut {
            network: echo(&net),
            zeta_lo: lo,
            zeta_hi: hi,
            steps,
            seed: args.seed,
            samples: sweep.samples,
            gaps: sweep.gaps,
            breaks: sweep.breaks,
            points,
            point_diagnostics,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
        return Ok(());
    }
    println!(
        "sweep over zeta in [{lo}, {hi}] with {steps} samples ({} converged, {} gaps):",
        sweep.samples.len(),
        sweep.gaps.len()
    );
    let out_name = &net.species()[net.output_species()].name;
    for s in &sweep.samples {
        println!(
            "  zeta = {:10.6}  {} = {:12.9}  detB = {:13.6e}  stable = {}",
            s.zeta,
            out_name,
            s.equilibrium.x[net.output_species()],
            s.det_b,
            s.equilibrium.stable
        );
    }
    for p in &points {
        match p.kind {
            numeric::PointKind::Infinitesimal => println!(
                "homeostasis point: zeta* = {:.9}, x* = {:?}, stable = {}",
                p.zeta_star, p.x_star, p.stable
            ),
            numeric::PointKind::PerfectInterval { zeta_hi } => println!(
                "det B vanishes on the whole interval [{}, {}] (perfect homeostasis)",
                p.zeta_star, zeta_hi
            ),
        }
    }
    for d in &point_diagnostics {
        println!("note: {d}");
    }
    Ok(())
}

fn cmd_odes(args: OdesArgs) -> Result<(), CrnError> {
    let args = args.net;
    let net = load_network(&args)?;
    if args.json {
        #[derive(Serialize)]
        struct OdesOut {
            network: NetworkEcho,
            odes: Vec<String>,
        }
        let out = OdesOut {
            network: echo(&net),
            odes: odes_text(&net),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
        return Ok(());
    }
    for line in odes_text(&net) {
        println!("{line}");
    }
    Ok(())
}
