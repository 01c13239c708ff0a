use waymark::gridworld::random_instance;

fn main() {
    for a3 in [false, true] {
        let spec = random_instance(4, 2, 7, a3).unwrap();
        println!("a3={a3}: waypoints={:?} goal={:?}", spec.waypoints, spec.goal);
    }
}
