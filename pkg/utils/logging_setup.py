"""
Configuração de logs em arquivo e console
Chamada uma única vez pelo app.py
"""
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

# =============================================================================
# 🚨 ÂNCORA: LOGGING_SETUP - Configuração de logs em arquivo
# Contexto: Logs salvos em data/logs/ com um arquivo por dia
# Cuidado: Console vai para stderr, stdout fica livre para CSV/JSON
# Dependências: Todos os módulos usam logging.getLogger(__name__)
# =============================================================================

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: str = "INFO", log_dir: Optional[str] = "data/logs",
                  to_file: bool = True) -> Optional[Path]:
    """
    Configura o logger raiz
    Retorna o caminho do arquivo de log (ou None sem arquivo)
    """
    handlers = [logging.StreamHandler(sys.stderr)]
    log_path = None

    if to_file and log_dir:
        try:
            directory = Path(log_dir)
            directory.mkdir(parents=True, exist_ok=True)
            log_path = directory / f"tunneling_{datetime.now():%Y%m%d}.log"
            handlers.append(logging.FileHandler(log_path, encoding='utf-8'))
        except OSError as e:
            # Sem arquivo, mas o console continua funcionando
            print(f"⚠️  Não foi possível criar log em {log_dir}: {e}", file=sys.stderr)
            log_path = None

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    return log_path
