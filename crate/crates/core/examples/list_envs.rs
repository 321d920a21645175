use terra::env::list_envs;

fn main() {
    let filter = std::env::args().nth(1);
    let envs = list_envs();
    let mut shown = 0;
    for e in envs.iter().filter(|e| filter.as_deref().is_none_or(|f| e.name.contains(f))) {
        println!("{:<40} obs {:4} act {:3}", e.name, e.obs_dim, e.act_dim);
        shown += 1;
    }
    println!("{shown} of {} environments", envs.len());
}
