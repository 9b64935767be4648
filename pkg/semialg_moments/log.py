from logging import getLogger, StreamHandler, INFO, DEBUG, Formatter


default_stream_handler = StreamHandler()
default_stream_handler.setLevel(INFO)
default_stream_handler.setFormatter(Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))

_loggers = {}


def get_log(name: str = ''):
    full_name = f'SemiAlgMoments{name and f":{name}" or ""}'
    lg = _loggers.get(full_name)
    if lg:
        return lg
    lg = getLogger(full_name)
    lg.addHandler(default_stream_handler)
    lg.propagate = False
    lg.setLevel(default_stream_handler.level)
    _loggers[full_name] = lg
    return lg


def set_debug():
    default_stream_handler.setLevel(DEBUG)
    for lg in _loggers.values():
        lg.setLevel(DEBUG)


default = get_log()
