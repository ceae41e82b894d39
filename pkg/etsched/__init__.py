# Energy-budget throughput scheduling on a speed-scalable processor
__version__ = "1.0.0"
