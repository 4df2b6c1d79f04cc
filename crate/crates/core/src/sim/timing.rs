//! Piecewise speed and latency schedules.

/// Product of the multipliers active at `t`.
pub fn speed_at(schedule: &[(f64, f64, f64)], t: f64) -> f64 {
    schedule
        .iter()
        .filter(|(s, e, _)| *s <= t && t < *e)
        .map(|(_, _, m)| *m)
        .product()
}

/// Sum of the extra delays active at `t`.
pub fn extra_latency(schedule: &[(f64, f64, f64)], t: f64) -> f64 {
    schedule
        .iter()
        .filter(|(s, e, _)| *s <= t && t < *e)
        .map(|(_, _, d)| *d)
        .sum()
}

/// Time at which `work` seconds of full-speed computation started at `start`
/// finish under the speed schedule.
pub fn compute_finish(schedule: &[(f64, f64, f64)], start: f64, work: f64) -> f64 {
    if schedule.is_empty() {
        return start + work;
    }
    let mut t = start;
    let mut left = work;
    loop {
        let speed = speed_at(schedule, t);
        let next = schedule
            .iter()
            .flat_map(|(s, e, _)| [*s, *e])
            .filter(|b| *b > t)
            .fold(f64::INFINITY, f64::min);
        let capacity = (next - t) * speed;
        if capacity >= left {
            return t + left / speed;
        }
        left -= capacity;
        t = next;
    }
}
