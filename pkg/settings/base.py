import os

from dotenv import load_dotenv
load_dotenv()

_SETTINGS_DIR = os.path.dirname(os.path.abspath(__file__))

KERNEL = {
    # 절대 오차 목표 (d=1 / d=2,3)
    'tol-1d': float(os.getenv('KERNEL_TOL_1D', '1e-10')),
    'tol-nd': float(os.getenv('KERNEL_TOL_ND', '1e-8')),
    # unit-time 축소 후 허용되는 가장 작은 tolerance
    'tol-floor': 1e-14,
    'min-alpha': 0.3,
    'max-panels': int(os.getenv('KERNEL_MAX_PANELS', '20000')),
    'gauss-nodes': 32,
    'panel-block': 64,
    'epsilon-window': 48,
    'series-radius': float(os.getenv('KERNEL_SERIES_RADIUS', '20')),
    'cache-size': 65536,
}
OU = {
    # alpha * t 가 이 값을 넘으면 reduced route만 사용
    'switch-alpha-t': 30.0,
}
SOLVER = {
    'min-points': 16,
    'max-grid-points': int(os.getenv('SOLVER_MAX_GRID_POINTS', str(2 ** 22))),
    'clamp': 1e-8,
    'mass-tol': 1e-4,
    'tail-tol': float(os.getenv('SOLVER_TAIL_TOL', '5e-2')),
    'fd-accuracy': 8,
    'fft-workers': int(os.getenv('SOLVER_FFT_WORKERS', '1')),
    'continuity-levels': (3, 10),
    'continuity-tail-start': 5,
    # 연속성 확인용 직접 contraction 격자
    'continuity-points': 256,
    'continuity-half-width': 4.0,
    'smoothness-stable-ratio': 0.05,
}
MONTE_CARLO = {
    'workers': int(os.getenv('MC_WORKERS', '1')),
    'chunk-size': int(os.getenv('MC_CHUNK_SIZE', str(2 ** 16))),
    'error-bars': 5.0,
    'outside-warn': 0.01,
    'ks-level': 0.05,
    'char-probes': (0.5, 1.0, 2.0),
    # d>1 subordination 척도 (Laplace e^{-λ^{alpha/2}} 정규화에서 1)
    'subordinator-scale': float(os.getenv('MC_SUBORDINATOR_SCALE', '1.0')),
}
VERIFIER = {
    'baselines': os.getenv(
        'VERIFY_BASELINES',
        os.path.join(_SETTINGS_DIR, 'golden', 'baselines.json'),
    ),
    'baseline-drift': 0.01,
    'collapse-tol': 1e-6,
    # quadrature tol = 이 값 * bound (ratio 오차 기준)
    'ratio-rtol': 1e-9,
    'derivative-drift': 0.1,
    'gradient-tol': 1e-5,
    # (times, radii) 개수, log10 범위는 [-2, 2]
    'sweep': {'quick': (5, 9), 'full': (9, 17)},
    'route-tol': 1e-4,
    'stationary-tol': 1e-4,
    'composition-tol': 1e-6,
    'residual-order': 1.8,
    'residual-tol': 1e-4,
    # 정상 밀도: ∂t 항과 공간 연산자 항 각각
    'stationary-residual-tol': 1e-4,
    'continuity-tol': 1e-2,
    'continuity-level': 8,
    # suite 격자: 주기 image 밀도와 spectral 절단 목표
    'image-density': 1e-5,
    'spectral-floor': 1e-6,
    # 과도 check (mass, 두 경로, residual, 합성) 중 가장 이른 시각
    'transient-start': 0.5,
    'tail-factor': 3.0,
    'calibration-tol': 0.02,
}
OUTPUT = {
    'root': os.getenv('FRACOU_OUTPUT_DIR', 'runs'),
}
LOGGING = {
    'level': os.getenv('LOG_LEVEL', 'INFO'),
    'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
}
