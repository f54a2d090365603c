"""
Configuração central do calculador de tempos de tunelamento
Todas as configurações, tolerâncias e constantes do projeto
"""
import math
import os
from pathlib import Path
from typing import Any, Dict, Tuple

from dotenv import load_dotenv

# Carregar variáveis de ambiente
load_dotenv()

# =============================================================================
# 🚨 ÂNCORA: ENV_VARS - Variáveis de ambiente
# Contexto: Logs e paralelismo podem ser ajustados sem mexer no código
# Cuidado: Valores numéricos da física NÃO vêm do .env (reprodutibilidade)
# Dependências: app.py, utils/logging_setup.py, runner/sweep.py
# =============================================================================

LOG_LEVEL: str = os.getenv("TUNNELING_LOG_LEVEL", "INFO")
LOG_DIR: str = os.getenv("TUNNELING_LOG_DIR", "data/logs")
LOG_TO_FILE: bool = os.getenv("TUNNELING_LOG_TO_FILE", "true").lower() == "true"
THREADS: int = int(os.getenv("TUNNELING_THREADS", str(os.cpu_count() or 1)))

ARTIFACT_VERSION: str = "0.3.0"

# =============================================================================
# 🚨 ÂNCORA: VALIDATION - Validação suave de configurações
# Contexto: Avisa sobre configs estranhas mas não trava o programa
# Cuidado: Log em arquivo é opcional, o console sempre funciona
# Dependências: Executada ao importar
# =============================================================================

def validate_config() -> Dict[str, bool]:
    """Valida configurações e retorna status"""
    log_parent = Path(LOG_DIR)
    while not log_parent.exists() and log_parent != log_parent.parent:
        log_parent = log_parent.parent
    status = {
        "log_dir_writable": os.access(log_parent, os.W_OK),
        "threads": THREADS >= 1,
    }

    # Avisos amigáveis
    if LOG_TO_FILE and not status["log_dir_writable"]:
        print(f"⚠️  AVISO: diretório de logs sem permissão de escrita: {LOG_DIR}")
        print("   Defina TUNNELING_LOG_TO_FILE=false ou outro TUNNELING_LOG_DIR")

    if not status["threads"]:
        print(f"⚠️  AVISO: TUNNELING_THREADS={THREADS} inválido, usando 1")

    return status

# Executar validação ao importar
CONFIG_STATUS = validate_config()

# =============================================================================
# 🚨 ÂNCORA: QUADRATURE_DEFAULTS - Tolerâncias das integrais em k
# Contexto: k_max é adimensional (kappa = k*a), painéis de largura pi/a
# Cuidado: tail_tol só marca a flag, tail_max aborta com TailDominated
# Dependências: QuadratureConfig em data/models.py
# =============================================================================

QUADRATURE_DEFAULTS: Dict[str, Any] = {
    "k_max": 40 * math.pi,
    "rel_tol": 1e-9,
    "abs_tol": 1e-14,
    "max_panels": 2 ** 16,
    "panel_seed": 1.0,
    "tail_tol": 1e-6,
    "tail_max": 1e-2,
}

FD_DEFAULTS: Dict[str, Any] = {
    "h0": 1e-3,  # relativo a max(kappa, 1)
    "richardson_levels": 3,
}

# =============================================================================
# 🚨 ÂNCORA: TIME_GRID_DEFAULTS - Oráculo no domínio do tempo
# Contexto: Rede uniforme em energia, período de recorrência = 4 * t_max
# Cuidado: k_max do oráculo não pode passar o k_max da quadratura
# Dependências: oracles/timedomain.py
# =============================================================================

TIME_GRID_DEFAULTS: Dict[str, Any] = {
    "t_max": 20.0,   # unidades de t0
    "n_t": 4096,
    "n_x": 64,
    "k_max": 20.0,   # kappa
    "period_factor": 4,
    "taper_fraction": 0.2,
}

# =============================================================================
# 🚨 ÂNCORA: ALPHA_DEFAULTS - Caminho regularizado e^{-alpha t}
# Contexto: alphas em unidades de 1/t_bar quando scale_by_lifetime=True
# Cuidado: Integral interna precisa de tolerância bem menor que a externa;
#          termos alpha^p ln alpha a partir de p = 4 em D e p = 2 em N (cauda t^-5)
# Dependências: oracles/regularized.py
# =============================================================================

ALPHA_DEFAULTS: Dict[str, Any] = {
    "alphas": (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625),
    "power": 1,
    "scale_by_lifetime": True,
    "inner_rel_tol": 1e-10,
    "outer_rel_tol": 1e-7,
    "denominator_log_from": 4,
    "numerator_log_from": 2,
    "max_extensions": 1,
    "extension_fraction": 0.1,
}

# =============================================================================
# 🚨 ÂNCORA: SWEEP_DEFAULTS - Varredura em v0*a^2
# Contexto: Cobre os dois ramos da curva tau_bar x <e>
# Cuidado: Passo pequeno demais torna a varredura lenta
# Dependências: runner/sweep.py, app.py
# =============================================================================

SWEEP_DEFAULTS: Dict[str, float] = {
    "v0a2_min": -12.0,
    "v0a2_max": 0.0,
    "step": 0.25,
}

VALIDATION_GRID: Tuple[float, ...] = (0.0, -2.0, -4.0, -8.0, -16.0)

# =============================================================================
# 🚨 ÂNCORA: ACCEPTANCE - Limiares de aceitação
# Contexto: Comparações entre caminhos independentes
# Cuidado: bound_state usa deficit > 1e-2, bem acima do erro de quadratura
# Dependências: moments.py, app.py (validate/oracle), testes
# =============================================================================

ACCEPTANCE: Dict[str, float] = {
    "denominator_rel": 1e-3,
    "numerator_rel": 1e-2,
    "oracle_rel": 2e-2,
    "oracle_tail": 1e-2,
    "oracle_tail_max": 5e-2,
    "bound_state_deficit": 1e-2,
    "right_branch_deficit": 1e-3,
}

# =============================================================================
# Função helper para debug
# =============================================================================

def print_config_status():
    """Imprime status da configuração (útil para debug)"""
    print("\n=== Tunneling Lifetime Config Status ===")
    print(f"✓ Log dir: {LOG_DIR} ({'writable' if CONFIG_STATUS['log_dir_writable'] else 'read-only'})")
    print(f"✓ Threads: {THREADS}")
    print(f"✓ k_max: {QUADRATURE_DEFAULTS['k_max']:.4f}  rel_tol: {QUADRATURE_DEFAULTS['rel_tol']:g}")
    print(f"✓ Version: {ARTIFACT_VERSION}")
    print("========================================\n")

# Executar ao importar com flag de debug
if os.getenv("DEBUG_CONFIG", "").lower() == "true":
    print_config_status()
