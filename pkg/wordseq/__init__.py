# Mark wordseq as a package to allow `python -m wordseq.cli` execution.
