use metamorph_core::dynamics::{self, DynamicsError, RigidBody};
use metamorph_core::frames::{hover_attitude, level_attitude};
use metamorph_core::{LoadSet, RigidBodyState, Vec3};
use nalgebra::{Matrix3, UnitQuaternion};

const G: f64 = 9.81;

fn body() -> RigidBody {
    let i = Matrix3::new(0.012, 0.001, -0.0005, 0.001, 0.02, 0.0008, -0.0005, 0.0008, 0.03);
    RigidBody::new(0.45, i).unwrap()
}

fn integrate<F>(b: &RigidBody, s0: RigidBodyState, dt: f64, t_end: f64, mut loads: F) -> RigidBodyState
where
    F: FnMut(&RigidBodyState) -> LoadSet,
{
    let n = (t_end / dt).round() as usize;
    let mut s = s0;
    for k in 0..n {
        s = dynamics::step(b, &s, dt, |x| Ok::<_, DynamicsError>(loads(x))).unwrap();
        s.time = (k + 1) as f64 * dt;
    }
    s
}

fn spin_state() -> RigidBodyState {
    let mut s = RigidBodyState::at_rest(Vec3::new(1.0, -2.0, 3.0), UnitQuaternion::from_euler_angles(0.3, -0.2, 1.1));
    s.velocity = Vec3::new(0.5, -0.2, 0.1);
    s.angular_velocity = Vec3::new(1.2, -0.7, 0.4);
    s
}

fn energy(b: &RigidBody, w: &Vec3) -> f64 {
    0.5 * w.dot(&(b.inertia * w))
}

#[test]
fn free_fall_matches_closed_form() {
    let b = body();
    let s0 = RigidBodyState::at_rest(Vec3::new(0.0, 0.0, 100.0), level_attitude());
    let s = integrate(&b, s0, 1e-3, 1.0, |x| dynamics::gravity_body(x, b.mass, G));
    assert!((100.0 - s.position.z - 0.5 * G).abs() < 1e-9, "drop {}", 100.0 - s.position.z);
    assert!((s.world_velocity().z + G).abs() < 1e-9);
}

#[test]
fn rk4_order_from_step_halving() {
    // spring-restrained translation plus torque-free tumbling
    let b = body();
    let mut s0 = spin_state();
    s0.angular_velocity *= 8.0;
    let k = 40.0;
    let loads = |x: &RigidBodyState| LoadSet::force_only(-k * x.attitude.inverse_transform_vector(&x.position));
    let run = |dt: f64| integrate(&b, s0, dt, 1.0, loads);
    let reference = run(1e-5);
    let err = |s: &RigidBodyState| {
        let dq = (s.attitude.inverse() * reference.attitude).angle();
        (s.position - reference.position)
            .amax()
            .max((s.angular_velocity - reference.angular_velocity).amax())
            .max(dq)
    };
    let e: Vec<f64> = [4e-3, 2e-3, 1e-3].iter().map(|&dt| err(&run(dt))).collect();
    let p1 = (e[0] / e[1]).log2();
    let p2 = (e[1] / e[2]).log2();
    assert!(p1 >= 3.8 && p2 >= 3.8, "orders {p1} {p2} errors {e:?}");
}

#[test]
fn torque_free_energy_and_momentum() {
    let b = body();
    let s0 = spin_state();
    let e0 = energy(&b, &s0.angular_velocity);
    let h0 = (b.inertia * s0.angular_velocity).norm();
    let hw0 = s0.attitude * (b.inertia * s0.angular_velocity);
    let s = integrate(&b, s0, 1e-3, 10.0, |_| LoadSet::zero());
    let e1 = energy(&b, &s.angular_velocity);
    let h1 = (b.inertia * s.angular_velocity).norm();
    let hw1 = s.attitude * (b.inertia * s.angular_velocity);
    assert!(((e1 - e0) / e0).abs() < 1e-8, "energy drift {}", (e1 - e0) / e0);
    assert!(((h1 - h0) / h0).abs() < 1e-8, "momentum drift {}", (h1 - h0) / h0);
    assert!((hw1 - hw0).norm() / h0 < 1e-8);
}

#[test]
fn long_run_keeps_unit_quaternion_and_momentum() {
    let b = body();
    let s0 = spin_state();
    let vw0 = s0.world_velocity();
    let hw0 = s0.attitude * (b.inertia * s0.angular_velocity);
    let s = integrate(&b, s0, 1e-3, 100.0, |_| LoadSet::zero());
    assert!((s.attitude.quaternion().norm() - 1.0).abs() < 1e-9);
    assert!((s.world_velocity() - vw0).amax() < 1e-10);
    let hw = s.attitude * (b.inertia * s.angular_velocity);
    assert!((hw - hw0).amax() < 1e-9, "{:e}", (hw - hw0).amax());
    let expected = s0.position + vw0 * 100.0;
    assert!((s.position - expected).amax() < 1e-8);
}

#[test]
fn resting_on_the_contact_spring() {
    let b = body();
    let contact = metamorph_core::ContactModel::default();
    let weight = b.mass * G;
    let z0 = contact.rest_height(weight);
    assert!((contact.height - z0 - 0.008829).abs() < 1e-12);
    let s0 = RigidBodyState::at_rest(Vec3::new(0.0, 0.0, z0 + 0.02), hover_attitude());
    let s = integrate(&b, s0, 1e-3, 5.0, |x| {
        dynamics::gravity_body(x, b.mass, G) + dynamics::ground_contact(x, &contact)
    });
    assert!((s.position.z - z0).abs() < 1e-6);
    assert!(s.world_velocity().norm() < 1e-5);
}
